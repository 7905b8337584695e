#include "cfsim/fronthaul.hpp"

#include <stdexcept>

namespace cfsim {

QuantizedSignal quantize_received(const Eigen::VectorXcd& y,
                                  const Eigen::MatrixXd& beta,
                                  const Eigen::VectorXd& q, double rho, int N,
                                  const QuantizerDesign& design_y) {
  const int M = static_cast<int>(beta.rows());
  if (q.size() != beta.cols())
    throw std::invalid_argument("quantize_received: beta/q dimension mismatch");
  if (y.size() != static_cast<long>(M) * N)
    throw std::invalid_argument("quantize_received: y/beta dimension mismatch");
  QuantizedSignal out;
  out.a_tilde = design_y.a_tilde;
  out.alpha = design_y.alpha;
  out.y_check = y;
  out.var_ey.resize(M);
  for (int m = 0; m < M; ++m) {
    const double power = rho * beta.row(m).dot(q) + 1.0;
    quantize_complex(out.y_check.data() + m * N, static_cast<std::size_t>(N),
                     power, design_y);
    out.var_ey(m) = design_y.var_bussgang * power;
  }
  return out;
}

QuantizedEstimates quantize_estimates(const ChannelEstimate& est, int N,
                                      const QuantizerDesign& design_g) {
  const int M = static_cast<int>(est.gamma.rows());
  const int K = static_cast<int>(est.gamma.cols());
  if (est.g_hat.rows() != static_cast<long>(M) * N || est.g_hat.cols() != K)
    throw std::invalid_argument("quantize_estimates: estimate dimension mismatch");
  if ((est.gamma.array() <= 0.0).any())
    throw std::invalid_argument("quantize_estimates: gamma must be positive");
  QuantizedEstimates out;
  out.alpha = design_g.alpha;
  out.g_check = est.g_hat;
  out.var_eg.resize(M, K);
  for (int k = 0; k < K; ++k) {
    for (int m = 0; m < M; ++m) {
      quantize_complex(out.g_check.data() + k * out.g_check.rows() + m * N,
                       static_cast<std::size_t>(N), est.gamma(m, k), design_g);
      out.var_eg(m, k) = design_g.var_max * est.gamma(m, k);
    }
  }
  return out;
}

}  // namespace cfsim
