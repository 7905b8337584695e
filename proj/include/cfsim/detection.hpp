#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "cfsim/airlink.hpp"
#include "cfsim/fronthaul.hpp"
#include "cfsim/geometry.hpp"
#include "cfsim/quantizer.hpp"

namespace cfsim {

enum class DetectorKind { MRC, ZF, MMSE };

std::string detector_name(DetectorKind kind);
DetectorKind parse_detector(const std::string& name);  // case-insensitive

// Diagonal effective-noise covariance of the quantized uplink. S and T hold
// the per-AP diagonal values; within an AP the N antennas share one value
// (the rep structure), so the full MN diagonal is their block replication.
struct NoiseCovariance {
  Eigen::MatrixXd S;    // M x K: (var_ey/a_tilde^2 + 1) * beta
  Eigen::MatrixXd T;    // M x K: (1 - var_eg) * gamma
  double f = 0.0;       // var_ey / a_tilde^2
  Eigen::VectorXd rlb;  // MN assembled diagonal, strictly positive
  int N = 1;
};

// rlb = rho * sum_k q_k (S_k - T_k) + 1 + f per antenna. With both designs
// transparent this reduces to the unquantized rho*sum q(beta-gamma) + 1.
// Throws if any diagonal entry is nonpositive (invalid quantizer design).
NoiseCovariance build_noise_covariance(const Eigen::MatrixXd& beta,
                                       const Eigen::MatrixXd& gamma,
                                       const Eigen::VectorXd& q, double rho,
                                       int N, const QuantizerDesign& design_y,
                                       const QuantizerDesign& design_g);

// MN x K bank of detector columns built from the quantized estimates.
// MRC: G itself. ZF: G (G^H G)^{-1}, rejecting Gram matrices whose relative
// smallest singular value falls below 1e-10. MMSE: (a~^2 rho G diag(q) G^H +
// diag(rlb))^{-1} G, solved through the K x K Woodbury form.
Eigen::MatrixXcd build_detector(DetectorKind kind,
                                const Eigen::MatrixXcd& g_check,
                                const Eigen::VectorXd& rlb,
                                const Eigen::VectorXd& q, double rho,
                                double a_tilde);

// SINR of user k for detector column v: rho q_k |v^H g_k|^2 over
// rho sum_{k'!=k} q_k' |v^H g_k'|^2 + v^H diag(rlb) v. Scale invariant in v.
double sinr_closed_form(const Eigen::VectorXcd& v,
                        const Eigen::MatrixXcd& g_check,
                        const Eigen::VectorXd& rlb, const Eigen::VectorXd& q,
                        double rho, int k);

Eigen::VectorXd sinr_all_users(const Eigen::MatrixXcd& V,
                               const Eigen::MatrixXcd& g_check,
                               const Eigen::VectorXd& rlb,
                               const Eigen::VectorXd& q, double rho);

// One (bit width, detector) variant of the rate pipeline. alpha = 0 designs
// disable the corresponding quantizer (perfect-fronthaul baseline).
struct RateParams {
  int N = 1;
  double rho = 1.0;          // normalized uplink data SNR
  double pilot_power = 1.0;  // normalized pilot symbol SNR
  Eigen::VectorXd q;         // K power-control coefficients
  QuantizerDesign design_y;
  QuantizerDesign design_g;
  DetectorKind kind = DetectorKind::MRC;
  double prefactor = 1.0;  // e.g. 1 - tau_p/tau_c when overhead is counted
};

// Per-user ergodic rates for one drop: mean of log2(1+SINR) over n channel,
// estimation-noise and quantization realizations, times the prefactor.
// Deterministic in seed.
Eigen::VectorXd ergodic_rate(const RateParams& params, const NetworkDrop& drop,
                             const PilotBook& book, int n, std::uint64_t seed);

// Fused variant evaluation sharing the channel and estimation draws across
// all entries; row i holds the per-user rates of variants[i]. All variants
// must agree on N and pilot_power (they share the physical realizations).
// Evaluating a variant alone or fused gives identical results.
Eigen::MatrixXd ergodic_rates(const std::vector<RateParams>& variants,
                              const NetworkDrop& drop, const PilotBook& book,
                              int n, std::uint64_t seed);

// 2 alpha (N K + N tau_f) / T_c bits per second per AP: one 2*alpha-bit
// complex sample per antenna for each of K estimates and tau_f data symbols
// in every coherence interval of T_c seconds.
double backhaul_rate(int alpha, int N, int K, int tau_f, double T_c_s);

}  // namespace cfsim
