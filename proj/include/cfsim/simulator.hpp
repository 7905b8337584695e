#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "cfsim/detection.hpp"
#include "cfsim/geometry.hpp"

namespace cfsim {

struct SimConfig {
  int M = 10, N = 25, K = 40;
  double D_km = 1.0;
  int tau_p = 40, tau_c = 200;
  double T_c_ms = 1.0;
  double pilot_power_mW = 100.0;
  double data_power_mW = 100.0;
  double bandwidth_Hz = 20e6;
  double noise_figure_dB = 9.0;
  double sigma_sh_dB = 8.0;
  PathLossModel pathloss;
  std::vector<int> alpha_list = {1, 2, 3, 4, 5, 6, 7, 8, 9, 12};
  std::vector<DetectorKind> detector_list = {
      DetectorKind::MRC, DetectorKind::ZF, DetectorKind::MMSE};
  int n_drops = 50;
  int n_inner = 50;
  std::uint64_t seed = 1;
  bool overhead_prefactor = false;  // multiply rates by 1 - tau_p/tau_c
  bool perfect_backhaul = true;     // include the unquantized baseline
};

// Throws std::invalid_argument naming the offending key.
void validate_config(const SimConfig& config);

struct RateReport {
  DetectorKind kind = DetectorKind::MRC;
  int alpha = 0;             // 0 = perfect-backhaul baseline
  Eigen::MatrixXd per_drop;  // rows: drops of this shard; cols: users
  Eigen::VectorXd per_user;  // drop-averaged rates, bits/s/Hz
  double avg_rate = 0.0;
  double avg_se = 0.0;  // standard error of avg_rate across drops
  double backhaul_per_ap = 0.0;  // bits/s; 0 marks the unconstrained baseline
};

struct ExperimentResult {
  SimConfig config;
  int drop_begin = 0;  // index of the first row of per_drop
  std::vector<RateReport> reports;  // detector-major, baseline then alphas
};

enum class ExecMode { Parallel, Serial };

// Drop d derives every stream from mix_seed(seed, d), so scheduling, thread
// count and sharding cannot change any number.
ExperimentResult run_experiment(const SimConfig& config,
                                ExecMode mode = ExecMode::Parallel);
ExperimentResult run_experiment_shard(const SimConfig& config, int begin,
                                      int end,
                                      ExecMode mode = ExecMode::Parallel);
// Contiguous shards of one config, in any order, back to the full run.
ExperimentResult merge_shards(const std::vector<ExperimentResult>& shards);

struct ReportSummary {
  DetectorKind kind = DetectorKind::MRC;
  int alpha = 0;
  double avg_rate = 0.0;
  double avg_se = 0.0;
  double outage5 = 0.0;  // 5th percentile of pooled per-user rates
  double backhaul_per_ap = 0.0;
};

std::vector<ReportSummary> summarize(const std::vector<RateReport>& reports);

// p in [0, 100]; linear interpolation between order statistics.
double percentile(std::vector<double> values, double p);

}  // namespace cfsim
