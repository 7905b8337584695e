#include "cfsim/detection.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace cfsim {

namespace {

constexpr double kZfRankTol = 1e-10;  // relative to the largest singular value

using Cplx = std::complex<double>;

void check_dims(const Eigen::MatrixXcd& g_check, const Eigen::VectorXd& rlb,
                const Eigen::VectorXd& q) {
  if (g_check.rows() != rlb.size())
    throw std::invalid_argument("detector: estimate rows mismatch rlb length");
  if (g_check.cols() != q.size())
    throw std::invalid_argument("detector: estimate columns mismatch q length");
}

Eigen::MatrixXcd zf_detector(const Eigen::MatrixXcd& g_check) {
  const Eigen::Index K = g_check.cols();
  if (g_check.rows() < K)
    throw std::runtime_error(
        "zero-forcing: fewer antennas than users (MN < K), estimate matrix "
        "cannot have full column rank");
  // The Gram eigenvalues square the conditioning and bottom out near machine
  // epsilon, so the 1e-10 singular-value tolerance needs a true SVD.
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(g_check,
                                      Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv(0);
  const double rel = smax > 0.0 ? sv(K - 1) / smax : 0.0;
  if (rel < kZfRankTol) {
    std::ostringstream msg;
    msg << "zero-forcing: estimate matrix is rank deficient (relative "
           "singular value "
        << std::scientific << std::setprecision(3) << rel << " below "
        << kZfRankTol << ")";
    throw std::runtime_error(msg.str());
  }
  return svd.matrixU() * sv.cwiseInverse().cast<Cplx>().asDiagonal() *
         svd.matrixV().adjoint();
}

Eigen::MatrixXcd mmse_detector(const Eigen::MatrixXcd& g_check,
                               const Eigen::VectorXd& rlb,
                               const Eigen::VectorXd& q, double rho,
                               double a_tilde) {
  if (a_tilde <= 0.0)
    throw std::invalid_argument("mmse detector: a_tilde must be positive");
  const Eigen::Index K = g_check.cols();
  const Eigen::MatrixXcd X =
      rlb.cwiseInverse().cast<Cplx>().asDiagonal() * g_check;
  const double c = a_tilde * a_tilde * rho;
  if (c == 0.0) return X;
  Eigen::MatrixXcd gram = g_check.adjoint() * X;
  gram = 0.5 * (gram + gram.adjoint()).eval();
  if (q.minCoeff() > 0.0) {
    // Symmetrized Woodbury system: with Q^(1/2) pulled inside, the K x K
    // matrix is Hermitian positive definite and admits a Cholesky solve.
    const Eigen::VectorXd sq = q.cwiseSqrt();
    Eigen::MatrixXcd B = sq.cast<Cplx>().asDiagonal() * gram *
                         sq.cast<Cplx>().asDiagonal();
    B = (c * B + Eigen::MatrixXcd::Identity(K, K)).eval();
    Eigen::LLT<Eigen::MatrixXcd> llt(B);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("mmse detector: covariance solve failed");
    const Eigen::MatrixXcd rhs = sq.cwiseInverse().cast<Cplx>().asDiagonal();
    return X * (sq.cast<Cplx>().asDiagonal() * llt.solve(rhs));
  }
  // Zero-power users make the scaled system singular; fall back to LU on the
  // unsymmetrized form.
  const Eigen::MatrixXcd B = Eigen::MatrixXcd::Identity(K, K) +
                             c * (q.cast<Cplx>().asDiagonal() * gram);
  return X * B.partialPivLu().solve(Eigen::MatrixXcd::Identity(K, K));
}

}  // namespace

std::string detector_name(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::MRC: return "MRC";
    case DetectorKind::ZF: return "ZF";
    case DetectorKind::MMSE: return "MMSE";
  }
  throw std::invalid_argument("unknown detector kind");
}

DetectorKind parse_detector(const std::string& name) {
  std::string low = name;
  std::transform(low.begin(), low.end(), low.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  if (low == "mrc") return DetectorKind::MRC;
  if (low == "zf") return DetectorKind::ZF;
  if (low == "mmse") return DetectorKind::MMSE;
  throw std::invalid_argument("unknown detector: " + name);
}

NoiseCovariance build_noise_covariance(const Eigen::MatrixXd& beta,
                                       const Eigen::MatrixXd& gamma,
                                       const Eigen::VectorXd& q, double rho,
                                       int N, const QuantizerDesign& design_y,
                                       const QuantizerDesign& design_g) {
  const Eigen::Index M = beta.rows(), K = beta.cols();
  if (gamma.rows() != M || gamma.cols() != K)
    throw std::invalid_argument("noise covariance: gamma shape mismatch");
  if (q.size() != K)
    throw std::invalid_argument("noise covariance: q length mismatch");
  if (N < 1) throw std::invalid_argument("noise covariance: N must be >= 1");
  if (rho < 0.0) throw std::invalid_argument("noise covariance: negative rho");
  if (q.minCoeff() < 0.0)
    throw std::invalid_argument("noise covariance: negative power control");
  if (design_y.a_tilde <= 0.0)
    throw std::invalid_argument("noise covariance: a_tilde must be positive");

  NoiseCovariance ncov;
  ncov.N = N;
  ncov.f = design_y.var_bussgang / (design_y.a_tilde * design_y.a_tilde);
  ncov.S = (ncov.f + 1.0) * beta;
  ncov.T = (1.0 - design_g.var_max) * gamma;
  ncov.rlb.resize(M * N);
  for (Eigen::Index m = 0; m < M; ++m) {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < K; ++k)
      acc += q(k) * (ncov.S(m, k) - ncov.T(m, k));
    const double entry = rho * acc + 1.0 + ncov.f;
    if (!(entry > 0.0))
      throw std::runtime_error(
          "noise covariance: nonpositive diagonal entry (invalid quantizer "
          "design) at AP " +
          std::to_string(m));
    ncov.rlb.segment(m * N, N).setConstant(entry);
  }
  return ncov;
}

Eigen::MatrixXcd build_detector(DetectorKind kind,
                                const Eigen::MatrixXcd& g_check,
                                const Eigen::VectorXd& rlb,
                                const Eigen::VectorXd& q, double rho,
                                double a_tilde) {
  check_dims(g_check, rlb, q);
  switch (kind) {
    case DetectorKind::MRC: return g_check;
    case DetectorKind::ZF: return zf_detector(g_check);
    case DetectorKind::MMSE:
      return mmse_detector(g_check, rlb, q, rho, a_tilde);
  }
  throw std::invalid_argument("unknown detector kind");
}

double sinr_closed_form(const Eigen::VectorXcd& v,
                        const Eigen::MatrixXcd& g_check,
                        const Eigen::VectorXd& rlb, const Eigen::VectorXd& q,
                        double rho, int k) {
  check_dims(g_check, rlb, q);
  if (v.size() != g_check.rows())
    throw std::invalid_argument("sinr: detector length mismatch");
  if (k < 0 || k >= g_check.cols())
    throw std::invalid_argument("sinr: user index out of range");
  if (v.squaredNorm() == 0.0)
    throw std::invalid_argument("sinr: zero detector vector");
  const Eigen::RowVectorXcd w = v.adjoint() * g_check;
  double interference = 0.0;
  for (Eigen::Index kk = 0; kk < w.size(); ++kk)
    if (kk != k) interference += q(kk) * std::norm(w(kk));
  const double noise = rlb.dot(v.cwiseAbs2());
  return rho * q(k) * std::norm(w(k)) / (rho * interference + noise);
}

Eigen::VectorXd sinr_all_users(const Eigen::MatrixXcd& V,
                               const Eigen::MatrixXcd& g_check,
                               const Eigen::VectorXd& rlb,
                               const Eigen::VectorXd& q, double rho) {
  check_dims(g_check, rlb, q);
  if (V.rows() != g_check.rows() || V.cols() != g_check.cols())
    throw std::invalid_argument("sinr: detector bank shape mismatch");
  const Eigen::Index K = g_check.cols();
  const Eigen::MatrixXcd W = V.adjoint() * g_check;  // W(k, k') = v_k^H g_k'
  Eigen::VectorXd sinr(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    if (V.col(k).squaredNorm() == 0.0)
      throw std::invalid_argument("sinr: zero detector vector");
    double interference = 0.0;
    for (Eigen::Index kk = 0; kk < K; ++kk)
      if (kk != k) interference += q(kk) * std::norm(W(k, kk));
    const double noise = rlb.dot(V.col(k).cwiseAbs2());
    sinr(k) = rho * q(k) * std::norm(W(k, k)) / (rho * interference + noise);
  }
  return sinr;
}

Eigen::MatrixXd ergodic_rates(const std::vector<RateParams>& variants,
                              const NetworkDrop& drop, const PilotBook& book,
                              int n, std::uint64_t seed) {
  if (variants.empty())
    throw std::invalid_argument("ergodic rate: no variants given");
  if (n < 1)
    throw std::invalid_argument("ergodic rate: need at least one realization");
  const int K = drop.K;
  const int N = variants.front().N;
  const double p_p = variants.front().pilot_power;
  if (drop.beta.rows() != drop.M || drop.beta.cols() != K)
    throw std::invalid_argument("ergodic rate: drop fading table mismatch");
  if (book.K() != K)
    throw std::invalid_argument("ergodic rate: pilot book size mismatch");
  for (const auto& var : variants) {
    if (var.N != N || var.pilot_power != p_p)
      throw std::invalid_argument(
          "ergodic rate: variants must share N and pilot_power");
    if (var.q.size() != K)
      throw std::invalid_argument("ergodic rate: q length mismatch");
  }

  Eigen::MatrixXd c, gamma;
  mmse_statistics(drop.beta, book, p_p, c, gamma);
  std::vector<Eigen::VectorXd> rlbs;
  rlbs.reserve(variants.size());
  for (const auto& var : variants)
    rlbs.push_back(build_noise_covariance(drop.beta, gamma, var.q, var.rho, N,
                                          var.design_y, var.design_g)
                       .rlb);

  constexpr double kInvLn2 = 1.0 / std::numbers::ln2;
  Eigen::MatrixXd rates = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(variants.size()), K);
  std::vector<std::pair<int, Eigen::MatrixXcd>> quantized;  // keyed by alpha
  for (int r = 0; r < n; ++r) {
    try {
      const std::uint64_t seed_real = mix_seed(seed, 100 + r);
      Rng rng_h(mix_seed(seed_real, 0));
      Rng rng_omega(mix_seed(seed_real, 1));
      const ChannelState st = sample_channel(drop.beta, N, rng_h);
      const ChannelEstimate est = estimate_channels(st, book, p_p, rng_omega);
      quantized.clear();
      for (std::size_t i = 0; i < variants.size(); ++i) {
        const auto& var = variants[i];
        const Eigen::MatrixXcd* gq = &est.g_hat;
        if (var.design_g.alpha != 0) {
          auto it = std::find_if(
              quantized.begin(), quantized.end(),
              [&](const auto& e) { return e.first == var.design_g.alpha; });
          if (it == quantized.end()) {
            quantized.emplace_back(
                var.design_g.alpha,
                quantize_estimates(est, N, var.design_g).g_check);
            it = std::prev(quantized.end());
          }
          gq = &it->second;
        }
        const Eigen::MatrixXcd V = build_detector(
            var.kind, *gq, rlbs[i], var.q, var.rho, var.design_y.a_tilde);
        const Eigen::VectorXd sinr =
            sinr_all_users(V, *gq, rlbs[i], var.q, var.rho);
        for (int k = 0; k < K; ++k)
          rates(static_cast<Eigen::Index>(i), k) +=
              std::log1p(sinr(k)) * kInvLn2;
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("realization " + std::to_string(r) + ": " +
                               e.what());
    }
  }
  rates /= n;
  for (std::size_t i = 0; i < variants.size(); ++i)
    rates.row(static_cast<Eigen::Index>(i)) *= variants[i].prefactor;
  return rates;
}

Eigen::VectorXd ergodic_rate(const RateParams& params, const NetworkDrop& drop,
                             const PilotBook& book, int n,
                             std::uint64_t seed) {
  return ergodic_rates({params}, drop, book, n, seed).row(0);
}

double backhaul_rate(int alpha, int N, int K, int tau_f, double T_c_s) {
  if (alpha <= 0 || N <= 0 || K <= 0 || tau_f <= 0 || !(T_c_s > 0.0))
    throw std::invalid_argument("backhaul rate: all arguments must be positive");
  return 2.0 * alpha *
         (static_cast<double>(N) * K + static_cast<double>(N) * tau_f) / T_c_s;
}

}  // namespace cfsim
