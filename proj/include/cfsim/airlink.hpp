#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "cfsim/rng.hpp"

namespace cfsim {

// Pilot sequences are columns of the tau_p x tau_p identity, so the Gram
// entries |phi_k'^H phi_k|^2 are exactly 0 or 1 and contamination structure
// is a pure index relation.
struct PilotBook {
  int tau_p = 0;
  std::vector<int> assignment;  // per-user index into the base sequences

  int K() const { return static_cast<int>(assignment.size()); }
  double gram(int k1, int k2) const {
    return assignment[k1] == assignment[k2] ? 1.0 : 0.0;
  }
  Eigen::MatrixXd phi() const;  // tau_p x K materialized columns
};

struct ChannelState {
  int M = 0, N = 0, K = 0;
  Eigen::MatrixXd beta;  // M x K
  Eigen::MatrixXcd h;    // MN x K, unit variance per entry
  Eigen::MatrixXcd g;    // MN x K, row block m scaled by sqrt(beta(m,k))
};

struct ChannelEstimate {
  Eigen::MatrixXcd g_hat;  // MN x K
  Eigen::MatrixXd c;       // M x K
  Eigen::MatrixXd gamma;   // M x K, per-entry mean square of g_hat
};

// tau_p >= K assigns distinct sequences; otherwise each user draws an index
// uniformly at random (random pilot assignment).
PilotBook build_pilot_book(int K, int tau_p, std::uint64_t rng_seed);

ChannelState sample_channel(const Eigen::MatrixXd& beta, int N, std::uint64_t rng_seed);
ChannelState sample_channel(const Eigen::MatrixXd& beta, int N, Rng& rng);

// c_mk and gamma_mk are deterministic in (beta, book, p_p); split out so the
// noise-covariance builder does not need channel draws.
void mmse_statistics(const Eigen::MatrixXd& beta, const PilotBook& book,
                     double p_p, Eigen::MatrixXd& c, Eigen::MatrixXd& gamma);

ChannelEstimate estimate_channels(const ChannelState& state, const PilotBook& book,
                                  double p_p, std::uint64_t rng_seed);
ChannelEstimate estimate_channels(const ChannelState& state, const PilotBook& book,
                                  double p_p, Rng& rng);

// Unit-variance circular Gaussian codebook symbols.
Eigen::VectorXcd draw_symbols(int K, Rng& rng);

// y = sqrt(rho) * G * (sqrt(q) .* s) + n. add_noise=false is the
// deterministic test hook.
Eigen::VectorXcd receive_uplink(const ChannelState& state, const Eigen::VectorXd& q,
                                double rho, const Eigen::VectorXcd& s, Rng& rng,
                                bool add_noise = true);
Eigen::VectorXcd receive_uplink(const ChannelState& state, const Eigen::VectorXd& q,
                                double rho, const Eigen::VectorXcd& s,
                                std::uint64_t rng_seed, bool add_noise = true);

}  // namespace cfsim
