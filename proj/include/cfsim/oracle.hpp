#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

#include "cfsim/detection.hpp"

namespace cfsim {

// Monte Carlo cross-check of the received-signal decomposition on a fixed
// tiny network (M=2, N=2, K=2, orthogonal pilots, full power). Term 1 is the
// desired signal, 2 interference, 3 thermal noise, 4 signal quantization,
// 5 estimate quantization, 6 estimation error.
struct OracleConfig {
  int n = 100000;
  std::uint64_t seed = 11;
  int alpha = 3;  // 0 = perfect fronthaul
  double pilot_power = 10.0;
  double rho = 1.0;
  // false: draw the terms from the statistical model (independent Gaussian
  // quantization errors at the attached variances). true: run the realized
  // quantizers and split the received signal by their actual errors.
  bool realized = false;
};

struct OracleTermReport {
  DetectorKind kind = DetectorKind::MRC;
  int user = 0;
  Eigen::Matrix<double, 6, 6> corr;  // |complex correlation|; guarded pairs 0
  std::array<bool, 6> degenerate{};  // variance below 1e-7 of the largest
  Eigen::Matrix<double, 6, 1> mc_power;  // mean |A_i|^2
  Eigen::Matrix<double, 6, 1> cf_power;  // mean closed-form counterpart
  Eigen::Matrix<double, 6, 1> z;     // paired z-scores, mc vs closed form
  double recon_residual = 0.0;       // max relative reconstruction error
};

struct OracleReport {
  OracleConfig config;
  Eigen::MatrixXd beta;
  std::vector<OracleTermReport> entries;  // detector-major, then user
};

OracleReport run_sinr_oracle(const OracleConfig& config);

// Realized-quantizer uncorrelation checks on matched Gaussian input: the
// Bussgang error against the input, the Max error against the output.
struct RemarkReport {
  int n = 0;
  double corr_input_error_y = 0.0;
  double corr_output_error_g = 0.0;
  double mean_error_g_z = 0.0;  // |mean| in standard errors
};

RemarkReport run_remark_checks(int alpha, int n, std::uint64_t seed);

}  // namespace cfsim
