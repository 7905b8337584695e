#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace cfsim {

// Pluggable large-scale path loss. Distances are clamped to min_dist_m before
// evaluation so coincident AP/user positions stay finite. The returned dB
// value is a gain (nonpositive for any sane parameterization), applied as
// beta = 10^(dB/10) * shadowing.
struct PathLossModel {
  enum class Kind { ThreeSlope, LogDistance };
  Kind kind = Kind::ThreeSlope;

  double l_fix_dB = 140.715;  // fixed loss at 1 km
  double d0_m = 200.0;        // inner breakpoint: loss is flat below this
  double d1_m = 500.0;        // outer breakpoint: 35 dB/decade beyond
  double exponent = 3.5;      // log-distance alternative
  double min_dist_m = 1.0;

  double path_loss_dB(double dist_m) const;
  double path_loss_linear(double dist_m) const;
};

struct NetworkDrop {
  int M = 0;
  int K = 0;
  double D_km = 0.0;
  std::vector<std::array<double, 2>> ap_positions;    // meters in [0, 1000*D_km)^2
  std::vector<std::array<double, 2>> user_positions;  // meters
  Eigen::MatrixXd beta;                               // M x K, linear
};

// Positions only; beta is left empty. i.i.d. uniform on the wrapped square.
NetworkDrop drop_network(int M, int K, double D_km, std::uint64_t rng_seed);

// Torus metric on [0, D_m)^2: per-axis wrap, then Euclidean norm.
double wrapped_distance(const std::array<double, 2>& p,
                        const std::array<double, 2>& q, double D_m);

// beta_mk = PL_mk * 10^(sigma_sh * z_mk / 10), z_mk i.i.d. standard normal
// drawn row-major over (m, k).
Eigen::MatrixXd large_scale_fading(const NetworkDrop& drop,
                                   const PathLossModel& model,
                                   double sigma_sh_dB, std::uint64_t rng_seed);

// P_n = BW * k_B * T_0 * 10^(NF/10), k_B = 1.381e-23, T_0 = 290 K.
double noise_power(double bandwidth_Hz, double noise_figure_dB);
double normalize_power(double p_watts, double P_n);

// Frozen-drop exchange format so detection-level tests can run on a fixed
// geometry.
void save_drop_json(const std::string& path, const NetworkDrop& drop);
NetworkDrop load_drop_json(const std::string& path);

}  // namespace cfsim
