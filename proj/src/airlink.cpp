#include "cfsim/airlink.hpp"

#include <cmath>
#include <stdexcept>

namespace cfsim {

Eigen::MatrixXd PilotBook::phi() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(tau_p, K());
  for (int k = 0; k < K(); ++k) out(assignment[k], k) = 1.0;
  return out;
}

PilotBook build_pilot_book(int K, int tau_p, std::uint64_t rng_seed) {
  if (tau_p <= 0) throw std::invalid_argument("build_pilot_book: tau_p must be positive");
  if (K < 1) throw std::invalid_argument("build_pilot_book: K must be >= 1");
  PilotBook book;
  book.tau_p = tau_p;
  book.assignment.resize(K);
  if (tau_p >= K) {
    for (int k = 0; k < K; ++k) book.assignment[k] = k;
  } else {
    Rng rng(rng_seed);
    std::uniform_int_distribution<int> pick(0, tau_p - 1);
    for (int k = 0; k < K; ++k) book.assignment[k] = pick(rng);
  }
  return book;
}

ChannelState sample_channel(const Eigen::MatrixXd& beta, int N, Rng& rng) {
  const int M = static_cast<int>(beta.rows());
  const int K = static_cast<int>(beta.cols());
  if (M < 1 || K < 1 || N < 1)
    throw std::invalid_argument("sample_channel: bad dimensions");
  if ((beta.array() <= 0.0).any())
    throw std::invalid_argument("sample_channel: beta must be positive");
  ChannelState st;
  st.M = M;
  st.N = N;
  st.K = K;
  st.beta = beta;
  st.h.resize(M * N, K);
  st.g.resize(M * N, K);
  for (int k = 0; k < K; ++k) {
    for (int m = 0; m < M; ++m) {
      const double scale = std::sqrt(beta(m, k));
      for (int n = 0; n < N; ++n) {
        const auto v = crandn(rng);
        st.h(m * N + n, k) = v;
        st.g(m * N + n, k) = scale * v;
      }
    }
  }
  return st;
}

ChannelState sample_channel(const Eigen::MatrixXd& beta, int N, std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  return sample_channel(beta, N, rng);
}

void mmse_statistics(const Eigen::MatrixXd& beta, const PilotBook& book,
                     double p_p, Eigen::MatrixXd& c, Eigen::MatrixXd& gamma) {
  const int M = static_cast<int>(beta.rows());
  const int K = static_cast<int>(beta.cols());
  if (book.K() != K) throw std::invalid_argument("mmse_statistics: book/beta mismatch");
  if (!(p_p > 0.0)) throw std::invalid_argument("mmse_statistics: p_p must be positive");
  const double tpp = static_cast<double>(book.tau_p) * p_p;
  const double sq_tpp = std::sqrt(tpp);
  c.resize(M, K);
  gamma.resize(M, K);
  for (int m = 0; m < M; ++m) {
    for (int k = 0; k < K; ++k) {
      double denom = 1.0;
      for (int k2 = 0; k2 < K; ++k2) denom += tpp * beta(m, k2) * book.gram(k2, k);
      c(m, k) = sq_tpp * beta(m, k) / denom;
      gamma(m, k) = sq_tpp * beta(m, k) * c(m, k);
    }
  }
}

ChannelEstimate estimate_channels(const ChannelState& state, const PilotBook& book,
                                  double p_p, Rng& rng) {
  const int M = state.M, N = state.N, K = state.K;
  if (book.K() != K) throw std::invalid_argument("estimate_channels: book/state mismatch");
  ChannelEstimate est;
  mmse_statistics(state.beta, book, p_p, est.c, est.gamma);
  const double sq_tpp = std::sqrt(static_cast<double>(book.tau_p) * p_p);

  // Projected pilot noise: one CN(0,1) column per base sequence per AP; users
  // sharing a pilot share the column.
  Eigen::MatrixXcd omega(M * N, book.tau_p);
  for (int m = 0; m < M; ++m)
    for (int t = 0; t < book.tau_p; ++t)
      for (int n = 0; n < N; ++n) omega(m * N + n, t) = crandn(rng);

  est.g_hat.resize(M * N, K);
  for (int k = 0; k < K; ++k) {
    Eigen::VectorXcd proj = omega.col(book.assignment[k]);
    for (int k2 = 0; k2 < K; ++k2)
      if (book.gram(k2, k) != 0.0) proj += sq_tpp * state.g.col(k2);
    for (int m = 0; m < M; ++m)
      est.g_hat.block(m * N, k, N, 1) = est.c(m, k) * proj.segment(m * N, N);
  }
  return est;
}

ChannelEstimate estimate_channels(const ChannelState& state, const PilotBook& book,
                                  double p_p, std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  return estimate_channels(state, book, p_p, rng);
}

Eigen::VectorXcd draw_symbols(int K, Rng& rng) {
  Eigen::VectorXcd s(K);
  for (int k = 0; k < K; ++k) s(k) = crandn(rng);
  return s;
}

Eigen::VectorXcd receive_uplink(const ChannelState& state, const Eigen::VectorXd& q,
                                double rho, const Eigen::VectorXcd& s, Rng& rng,
                                bool add_noise) {
  const int K = state.K;
  if (q.size() != K || s.size() != K)
    throw std::invalid_argument("receive_uplink: dimension mismatch");
  if ((q.array() < 0.0).any())
    throw std::invalid_argument("receive_uplink: negative transmit power");
  const double sq_rho = std::sqrt(rho);
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(state.M * state.N);
  for (int k = 0; k < K; ++k)
    y += (sq_rho * std::sqrt(q(k)) * s(k)) * state.g.col(k);
  if (add_noise)
    for (int i = 0; i < y.size(); ++i) y(i) += crandn(rng);
  return y;
}

Eigen::VectorXcd receive_uplink(const ChannelState& state, const Eigen::VectorXd& q,
                                double rho, const Eigen::VectorXcd& s,
                                std::uint64_t rng_seed, bool add_noise) {
  Rng rng(rng_seed);
  return receive_uplink(state, q, rho, s, rng, add_noise);
}

}  // namespace cfsim
