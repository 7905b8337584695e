#include "cfsim/oracle.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "cfsim/fronthaul.hpp"
#include "cfsim/rng.hpp"

namespace cfsim {

namespace {

using Cplx = std::complex<double>;

constexpr double kDegenerateTol = 1e-7;  // variance guard, relative

struct Accum {
  std::array<Cplx, 6> sum{};
  std::array<double, 6> sum_abs2{};
  Cplx cross[6][6] = {};  // sum A_i conj(A_j), upper triangle
  std::array<double, 6> sum_d{}, sum_d2{}, sum_cf{};
  double recon = 0.0;
};

double complex_corr(Cplx cov, double var_x, double var_y) {
  return std::abs(cov) / std::sqrt(var_x * var_y);
}

}  // namespace

OracleReport run_sinr_oracle(const OracleConfig& config) {
  if (config.n < 2) throw std::invalid_argument("oracle: need n >= 2");
  if (config.alpha < 0)
    throw std::invalid_argument("oracle: negative bit width");
  if (config.rho <= 0.0 || config.pilot_power <= 0.0)
    throw std::invalid_argument("oracle: powers must be positive");

  const int M = 2, N = 2, K = 2, MN = M * N;
  Eigen::MatrixXd beta(M, K);
  beta << 1.0, 0.3, 0.4, 0.9;
  const PilotBook book = build_pilot_book(K, K, 0);
  const double rho = config.rho;
  const Eigen::VectorXd q = Eigen::VectorXd::Ones(K);

  QuantizerDesign dy = perfect_design(), dg = perfect_design();
  if (config.alpha > 0) {
    dy = optimize_step_size(config.alpha, QuantizerModel::Bussgang);
    dg = optimize_step_size(config.alpha, QuantizerModel::Max);
  }
  Eigen::MatrixXd c, gamma;
  mmse_statistics(beta, book, config.pilot_power, c, gamma);
  const NoiseCovariance ncov =
      build_noise_covariance(beta, gamma, q, rho, N, dy, dg);

  const double sg2 = dg.var_max, sy2 = dy.var_bussgang, a = dy.a_tilde;
  Eigen::VectorXd p_ap(M);
  for (int m = 0; m < M; ++m) p_ap(m) = rho * beta.row(m).dot(q) + 1.0;

  const std::array<DetectorKind, 3> kinds = {
      DetectorKind::MRC, DetectorKind::ZF, DetectorKind::MMSE};
  std::array<std::array<Accum, 2>, 3> acc{};

  Eigen::MatrixXcd g_check(MN, K), e_g(MN, K), g_tilde(MN, K), g(MN, K);
  Eigen::VectorXcd s(K), noise(MN), e_y(MN), y(MN), y_check(MN);
  for (int r = 0; r < config.n; ++r) {
    Rng rng(mix_seed(config.seed, 1000 + r));
    if (!config.realized) {
      for (int k = 0; k < K; ++k)
        for (int i = 0; i < MN; ++i) {
          const int m = i / N;
          g_check(i, k) = std::sqrt((1.0 - sg2) * gamma(m, k)) * crandn(rng);
          e_g(i, k) = std::sqrt(sg2 * gamma(m, k)) * crandn(rng);
          g_tilde(i, k) =
              std::sqrt(beta(m, k) - gamma(m, k)) * crandn(rng);
        }
      g = g_check - e_g + g_tilde;
      s = draw_symbols(K, rng);
      for (int i = 0; i < MN; ++i) noise(i) = crandn(rng);
      y = std::sqrt(rho) * (g * s) + noise;
      for (int i = 0; i < MN; ++i)
        e_y(i) = std::sqrt(sy2 * p_ap(i / N)) * crandn(rng);
      y_check = a * y + e_y;
    } else {
      const ChannelState st = sample_channel(beta, N, rng);
      const ChannelEstimate est =
          estimate_channels(st, book, config.pilot_power, rng);
      g_check = config.alpha > 0 ? quantize_estimates(est, N, dg).g_check
                                 : est.g_hat;
      e_g = g_check - est.g_hat;
      g_tilde = st.g - est.g_hat;
      g = st.g;
      s = draw_symbols(K, rng);
      for (int i = 0; i < MN; ++i) noise(i) = crandn(rng);
      y = std::sqrt(rho) * (g * s) + noise;
      y_check = config.alpha > 0
                    ? quantize_received(y, beta, q, rho, N, dy).y_check
                    : y;
      e_y = y_check - a * y;
    }

    for (std::size_t d = 0; d < kinds.size(); ++d) {
      const Eigen::MatrixXcd V =
          build_detector(kinds[d], g_check, ncov.rlb, q, rho, a);
      for (int k = 0; k < K; ++k) {
        const Eigen::VectorXcd v = V.col(k);
        const Eigen::RowVectorXcd w = v.adjoint() * g_check;
        std::array<Cplx, 6> t{};
        t[0] = std::sqrt(rho * q(k)) * w(k) * s(k);
        for (int kk = 0; kk < K; ++kk)
          if (kk != k) t[1] += std::sqrt(rho * q(kk)) * w(kk) * s(kk);
        t[2] = (v.adjoint() * noise)(0);
        t[3] = (v.adjoint() * e_y)(0);
        for (int kk = 0; kk < K; ++kk)
          t[4] += std::sqrt(rho * q(kk)) * (v.adjoint() * e_g.col(kk))(0) *
                  s(kk);
        for (int kk = 0; kk < K; ++kk)
          t[5] += std::sqrt(rho * q(kk)) * (v.adjoint() * g_tilde.col(kk))(0) *
                  s(kk);

        const Cplx full = (v.adjoint() * y_check)(0);
        const Cplx recon =
            a * (t[0] + t[1] + t[2]) + t[3] - a * t[4] + a * t[5];
        Accum& ac = acc[d][k];
        ac.recon = std::max(ac.recon,
                            std::abs(full - recon) / std::max(1.0, std::abs(full)));

        Eigen::VectorXd vm2(M);
        for (int m = 0; m < M; ++m) vm2(m) = v.segment(m * N, N).squaredNorm();
        std::array<double, 6> cf{};
        cf[0] = rho * q(k) * std::norm(w(k));
        for (int kk = 0; kk < K; ++kk)
          if (kk != k) cf[1] += rho * q(kk) * std::norm(w(kk));
        cf[2] = v.squaredNorm();
        cf[3] = sy2 * p_ap.dot(vm2);
        for (int kk = 0; kk < K; ++kk)
          for (int m = 0; m < M; ++m) {
            cf[4] += rho * q(kk) * sg2 * gamma(m, kk) * vm2(m);
            cf[5] += rho * q(kk) * (beta(m, kk) - gamma(m, kk)) * vm2(m);
          }

        for (int i = 0; i < 6; ++i) {
          ac.sum[i] += t[i];
          ac.sum_abs2[i] += std::norm(t[i]);
          for (int j = i + 1; j < 6; ++j) ac.cross[i][j] += t[i] * std::conj(t[j]);
          const double diff = std::norm(t[i]) - cf[i];
          ac.sum_d[i] += diff;
          ac.sum_d2[i] += diff * diff;
          ac.sum_cf[i] += cf[i];
        }
      }
    }
  }

  OracleReport report;
  report.config = config;
  report.beta = beta;
  const double n = config.n;
  for (std::size_t d = 0; d < kinds.size(); ++d)
    for (int k = 0; k < K; ++k) {
      const Accum& ac = acc[d][k];
      OracleTermReport e;
      e.kind = kinds[d];
      e.user = k;
      e.recon_residual = ac.recon;
      std::array<Cplx, 6> mean;
      std::array<double, 6> var;
      double var_max_term = 0.0;
      for (int i = 0; i < 6; ++i) {
        mean[i] = ac.sum[i] / n;
        var[i] = std::max(ac.sum_abs2[i] / n - std::norm(mean[i]), 0.0);
        var_max_term = std::max(var_max_term, var[i]);
        e.mc_power(i) = ac.sum_abs2[i] / n;
        e.cf_power(i) = ac.sum_cf[i] / n;
        const double dbar = ac.sum_d[i] / n;
        const double vard =
            std::max(ac.sum_d2[i] / n - dbar * dbar, 0.0) * n / (n - 1.0);
        const double se = std::sqrt(vard / n);
        if (se > 0.0)
          e.z(i) = std::abs(dbar) / se;
        else
          e.z(i) = dbar == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
      }
      for (int i = 0; i < 6; ++i)
        e.degenerate[i] = var[i] < kDegenerateTol * var_max_term;
      e.corr.setZero();
      for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j) {
          if (e.degenerate[i] || e.degenerate[j]) continue;
          const Cplx cov = ac.cross[i][j] / n - mean[i] * std::conj(mean[j]);
          e.corr(i, j) = e.corr(j, i) = complex_corr(cov, var[i], var[j]);
        }
      report.entries.push_back(std::move(e));
    }
  return report;
}

RemarkReport run_remark_checks(int alpha, int n, std::uint64_t seed) {
  if (alpha < 1) throw std::invalid_argument("remark checks: need alpha >= 1");
  if (n < 2) throw std::invalid_argument("remark checks: need n >= 2");
  const QuantizerDesign dy = optimize_step_size(alpha, QuantizerModel::Bussgang);
  const QuantizerDesign dg = optimize_step_size(alpha, QuantizerModel::Max);

  Rng rng(mix_seed(seed, 7));
  // Bussgang reading on a single AP with n antenna samples
  const double rho = 1.0;
  Eigen::MatrixXd beta_y(1, 1);
  beta_y << 1.37;
  Eigen::VectorXd q1 = Eigen::VectorXd::Ones(1);
  const double p_y = rho * beta_y(0, 0) + 1.0;
  Eigen::VectorXcd y(n);
  for (int i = 0; i < n; ++i) y(i) = std::sqrt(p_y) * crandn(rng);
  const Eigen::VectorXcd err_y =
      quantize_received(y, beta_y, q1, rho, n, dy).y_check - dy.a_tilde * y;

  // Max reading on one estimate entry with n antenna samples
  const double gam = 0.8;
  ChannelEstimate est;
  est.g_hat.resize(n, 1);
  for (int i = 0; i < n; ++i) est.g_hat(i, 0) = std::sqrt(gam) * crandn(rng);
  est.c = Eigen::MatrixXd::Constant(1, 1, 1.0);
  est.gamma = Eigen::MatrixXd::Constant(1, 1, gam);
  const Eigen::MatrixXcd g_check = quantize_estimates(est, n, dg).g_check;
  const Eigen::VectorXcd err_g = g_check.col(0) - est.g_hat.col(0);

  const auto corr_of = [n](const Eigen::VectorXcd& x, const Eigen::VectorXcd& e) {
    const Cplx mx = x.mean(), me = e.mean();
    const Cplx cov = (x.array() * e.array().conjugate()).mean() -
                     mx * std::conj(me);
    const double vx = x.cwiseAbs2().mean() - std::norm(mx);
    const double ve = e.cwiseAbs2().mean() - std::norm(me);
    return complex_corr(cov, vx, ve);
  };

  RemarkReport rep;
  rep.n = n;
  rep.corr_input_error_y = corr_of(y, err_y);
  rep.corr_output_error_g = corr_of(g_check.col(0), err_g);
  const Cplx me = err_g.mean();
  const double ve = err_g.cwiseAbs2().mean() - std::norm(me);
  rep.mean_error_g_z = std::abs(me) / std::sqrt(ve / n);
  return rep;
}

}  // namespace cfsim
