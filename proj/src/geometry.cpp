#include "cfsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "cfsim/rng.hpp"

namespace cfsim {

double PathLossModel::path_loss_dB(double dist_m) const {
  const double d_km = std::max(dist_m, min_dist_m) / 1000.0;
  if (kind == Kind::LogDistance)
    return -l_fix_dB - 10.0 * exponent * std::log10(d_km);
  const double d0_km = d0_m / 1000.0;
  const double d1_km = d1_m / 1000.0;
  if (d_km > d1_km) return -l_fix_dB - 35.0 * std::log10(d_km);
  if (d_km > d0_km)
    return -l_fix_dB - 15.0 * std::log10(d1_km) - 20.0 * std::log10(d_km);
  return -l_fix_dB - 15.0 * std::log10(d1_km) - 20.0 * std::log10(d0_km);
}

double PathLossModel::path_loss_linear(double dist_m) const {
  return std::pow(10.0, path_loss_dB(dist_m) / 10.0);
}

NetworkDrop drop_network(int M, int K, double D_km, std::uint64_t rng_seed) {
  if (M < 1 || K < 1) throw std::invalid_argument("drop_network: M, K must be >= 1");
  if (!(D_km > 0.0)) throw std::invalid_argument("drop_network: D must be positive");
  const double D_m = 1000.0 * D_km;
  NetworkDrop drop;
  drop.M = M;
  drop.K = K;
  drop.D_km = D_km;
  Rng rng(rng_seed);
  drop.ap_positions.resize(M);
  for (auto& p : drop.ap_positions) p = {D_m * runif(rng), D_m * runif(rng)};
  drop.user_positions.resize(K);
  for (auto& p : drop.user_positions) p = {D_m * runif(rng), D_m * runif(rng)};
  return drop;
}

double wrapped_distance(const std::array<double, 2>& p,
                        const std::array<double, 2>& q, double D_m) {
  double dx = std::abs(p[0] - q[0]);
  double dy = std::abs(p[1] - q[1]);
  dx = std::min(dx, D_m - dx);
  dy = std::min(dy, D_m - dy);
  return std::hypot(dx, dy);
}

Eigen::MatrixXd large_scale_fading(const NetworkDrop& drop,
                                   const PathLossModel& model,
                                   double sigma_sh_dB, std::uint64_t rng_seed) {
  if (drop.M < 1 || drop.K < 1)
    throw std::invalid_argument("large_scale_fading: empty drop");
  const double D_m = 1000.0 * drop.D_km;
  Eigen::MatrixXd beta(drop.M, drop.K);
  Rng rng(rng_seed);
  for (int m = 0; m < drop.M; ++m) {
    for (int k = 0; k < drop.K; ++k) {
      const double d = wrapped_distance(drop.ap_positions[m],
                                        drop.user_positions[k], D_m);
      const double shadow_dB = sigma_sh_dB * randn(rng);
      beta(m, k) = model.path_loss_linear(d) * std::pow(10.0, shadow_dB / 10.0);
    }
  }
  return beta;
}

double noise_power(double bandwidth_Hz, double noise_figure_dB) {
  if (!(bandwidth_Hz > 0.0))
    throw std::invalid_argument("noise_power: bandwidth must be positive");
  return bandwidth_Hz * 1.381e-23 * 290.0 * std::pow(10.0, noise_figure_dB / 10.0);
}

double normalize_power(double p_watts, double P_n) {
  if (!(P_n > 0.0)) throw std::invalid_argument("normalize_power: P_n must be positive");
  return p_watts / P_n;
}

void save_drop_json(const std::string& path, const NetworkDrop& drop) {
  nlohmann::json j;
  j["M"] = drop.M;
  j["K"] = drop.K;
  j["D_km"] = drop.D_km;
  j["ap_positions"] = drop.ap_positions;
  j["user_positions"] = drop.user_positions;
  std::vector<std::vector<double>> beta(drop.beta.rows());
  for (int m = 0; m < drop.beta.rows(); ++m) {
    beta[m].resize(drop.beta.cols());
    for (int k = 0; k < drop.beta.cols(); ++k) beta[m][k] = drop.beta(m, k);
  }
  j["beta"] = beta;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_drop_json: cannot open " + path);
  out << j.dump(1);
}

NetworkDrop load_drop_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_drop_json: cannot open " + path);
  nlohmann::json j;
  in >> j;
  NetworkDrop drop;
  drop.M = j.at("M").get<int>();
  drop.K = j.at("K").get<int>();
  drop.D_km = j.at("D_km").get<double>();
  drop.ap_positions = j.at("ap_positions").get<std::vector<std::array<double, 2>>>();
  drop.user_positions = j.at("user_positions").get<std::vector<std::array<double, 2>>>();
  const auto beta = j.at("beta").get<std::vector<std::vector<double>>>();
  drop.beta.resize(drop.M, drop.K);
  for (int m = 0; m < drop.M; ++m)
    for (int k = 0; k < drop.K; ++k) drop.beta(m, k) = beta.at(m).at(k);
  return drop;
}

}  // namespace cfsim
