#pragma once

#include <Eigen/Dense>

#include "cfsim/airlink.hpp"
#include "cfsim/quantizer.hpp"

namespace cfsim {

// Quantized received signal under the Bussgang reading: y_check = a_tilde*y + e^y.
struct QuantizedSignal {
  Eigen::VectorXcd y_check;  // MN
  Eigen::VectorXd var_ey;    // M; per-entry error variance, equal across the
                             // N antennas of an AP
  double a_tilde = 1.0;
  int alpha = 0;
};

// Quantized channel estimates under the Max reading: g_check = g_hat + e^g.
struct QuantizedEstimates {
  Eigen::MatrixXcd g_check;  // MN x K
  Eigen::MatrixXd var_eg;    // M x K
  int alpha = 0;
};

struct FronthaulView {
  QuantizedEstimates estimates;
  QuantizedSignal signal;
};

// Normalization uses the analytical per-entry power rho*sum_k beta_mk q_k + 1
// (not the sample power): the AP knows the large-scale statistics, and the
// attached variance formula is stated in terms of them.
QuantizedSignal quantize_received(const Eigen::VectorXcd& y,
                                  const Eigen::MatrixXd& beta,
                                  const Eigen::VectorXd& q, double rho, int N,
                                  const QuantizerDesign& design_y);

// Per-entry normalization power gamma_mk; var_eg = var_max * gamma.
QuantizedEstimates quantize_estimates(const ChannelEstimate& est, int N,
                                      const QuantizerDesign& design_g);

}  // namespace cfsim
