#include "cfsim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include "cfsim/airlink.hpp"
#include "cfsim/rng.hpp"

namespace cfsim {

void validate_config(const SimConfig& c) {
  const auto fail = [](const std::string& msg) {
    throw std::invalid_argument("config: " + msg);
  };
  if (c.M < 1) fail("M must be >= 1");
  if (c.N < 1) fail("N must be >= 1");
  if (c.K < 1) fail("K must be >= 1");
  if (!(c.D_km > 0.0)) fail("D_km must be positive");
  if (c.tau_p < 1) fail("tau_p must be >= 1");
  if (c.tau_p > c.tau_c) fail("tau_p must be <= tau_c");
  if (!(c.T_c_ms > 0.0)) fail("T_c_ms must be positive");
  if (!(c.pilot_power_mW > 0.0)) fail("pilot_power_mW must be positive");
  if (!(c.data_power_mW > 0.0)) fail("data_power_mW must be positive");
  if (!(c.bandwidth_Hz > 0.0)) fail("bandwidth_Hz must be positive");
  if (c.noise_figure_dB < 0.0) fail("noise_figure_dB must be >= 0");
  if (c.sigma_sh_dB < 0.0) fail("sigma_sh_dB must be >= 0");
  if (!(c.pathloss.min_dist_m > 0.0)) fail("pathloss_min_dist_m must be positive");
  if (c.pathloss.kind == PathLossModel::Kind::ThreeSlope &&
      !(c.pathloss.d0_m < c.pathloss.d1_m))
    fail("pathloss_d0_m must be below pathloss_d1_m");
  if (c.alpha_list.empty() && !c.perfect_backhaul)
    fail("alpha_list is empty and perfect_backhaul is off: nothing to run");
  std::set<int> seen_alpha;
  for (int a : c.alpha_list) {
    if (a < 1 || a > 16) fail("alpha_list entries must lie in 1..16");
    if (!seen_alpha.insert(a).second) fail("alpha_list has duplicate entries");
  }
  if (!c.alpha_list.empty() && c.tau_p >= c.tau_c)
    fail("tau_p must be < tau_c for quantized variants (tau_f would be 0)");
  if (c.detector_list.empty()) fail("detector_list must not be empty");
  std::set<DetectorKind> seen_det(c.detector_list.begin(),
                                  c.detector_list.end());
  if (seen_det.size() != c.detector_list.size())
    fail("detector_list has duplicate entries");
  if (c.n_drops < 1) fail("n_drops must be >= 1");
  if (c.n_inner < 1) fail("n_inner must be >= 1");
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("percentile: empty input");
  if (p < 0.0 || p > 100.0)
    throw std::invalid_argument("percentile: p outside [0, 100]");
  std::sort(values.begin(), values.end());
  const double pos = p / 100.0 * (static_cast<double>(values.size()) - 1.0);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

namespace {

struct VariantPlan {
  std::vector<RateParams> params;
  std::vector<std::pair<DetectorKind, int>> labels;  // (kind, alpha)
};

VariantPlan plan_variants(const SimConfig& c, double rho, double p_p,
                          double prefactor) {
  std::map<int, std::pair<QuantizerDesign, QuantizerDesign>> designs;
  for (int a : c.alpha_list)
    designs.emplace(a,
                    std::make_pair(optimize_step_size(a, QuantizerModel::Bussgang),
                                   optimize_step_size(a, QuantizerModel::Max)));
  VariantPlan plan;
  RateParams base;
  base.N = c.N;
  base.rho = rho;
  base.pilot_power = p_p;
  base.q = Eigen::VectorXd::Ones(c.K);
  base.prefactor = prefactor;
  for (DetectorKind kind : c.detector_list) {
    base.kind = kind;
    if (c.perfect_backhaul) {
      base.design_y = perfect_design();
      base.design_g = perfect_design();
      plan.params.push_back(base);
      plan.labels.emplace_back(kind, 0);
    }
    for (int a : c.alpha_list) {
      base.design_y = designs.at(a).first;
      base.design_g = designs.at(a).second;
      plan.params.push_back(base);
      plan.labels.emplace_back(kind, a);
    }
  }
  return plan;
}

void finalize_report(RateReport& rep) {
  const Eigen::Index rows = rep.per_drop.rows();
  rep.per_user = rep.per_drop.colwise().mean().transpose();
  rep.avg_rate = rep.per_user.mean();
  const Eigen::VectorXd drop_avg = rep.per_drop.rowwise().mean();
  if (rows > 1) {
    const double var =
        (drop_avg.array() - drop_avg.mean()).square().sum() /
        (static_cast<double>(rows) - 1.0);
    rep.avg_se = std::sqrt(var / static_cast<double>(rows));
  } else {
    rep.avg_se = 0.0;
  }
}

}  // namespace

ExperimentResult run_experiment_shard(const SimConfig& config, int begin,
                                      int end, ExecMode mode) {
  validate_config(config);
  if (begin < 0 || end > config.n_drops || begin >= end)
    throw std::invalid_argument("shard: bad drop range");

  const double P_n = noise_power(config.bandwidth_Hz, config.noise_figure_dB);
  const double rho = normalize_power(config.data_power_mW * 1e-3, P_n);
  const double p_p = normalize_power(config.pilot_power_mW * 1e-3, P_n);
  const double prefactor =
      config.overhead_prefactor
          ? 1.0 - static_cast<double>(config.tau_p) / config.tau_c
          : 1.0;
  const VariantPlan plan = plan_variants(config, rho, p_p, prefactor);
  const std::size_t n_var = plan.params.size();
  const int rows = end - begin;

  std::vector<Eigen::MatrixXd> per_drop(
      n_var, Eigen::MatrixXd::Zero(rows, config.K));

  int error_drop = -1;
  std::string error_msg;
  const bool parallel = mode == ExecMode::Parallel;
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int d = begin; d < end; ++d) {
    try {
      const std::uint64_t seed_d = mix_seed(config.seed, d);
      NetworkDrop drop =
          drop_network(config.M, config.K, config.D_km, mix_seed(seed_d, 1));
      drop.beta = large_scale_fading(drop, config.pathloss, config.sigma_sh_dB,
                                     mix_seed(seed_d, 2));
      const PilotBook book =
          build_pilot_book(config.K, config.tau_p, mix_seed(seed_d, 3));
      const Eigen::MatrixXd rates =
          ergodic_rates(plan.params, drop, book, config.n_inner, seed_d);
      for (std::size_t v = 0; v < n_var; ++v)
        per_drop[v].row(d - begin) = rates.row(static_cast<Eigen::Index>(v));
    } catch (const std::exception& e) {
#pragma omp critical
      if (error_drop < 0 || d < error_drop) {
        error_drop = d;
        error_msg = "drop " + std::to_string(d) + ": " + e.what();
      }
    }
  }
  if (error_drop >= 0) throw std::runtime_error(error_msg);

  ExperimentResult result;
  result.config = config;
  result.drop_begin = begin;
  const double T_c_s = config.T_c_ms * 1e-3;
  const int tau_f = config.tau_c - config.tau_p;
  for (std::size_t v = 0; v < n_var; ++v) {
    RateReport rep;
    rep.kind = plan.labels[v].first;
    rep.alpha = plan.labels[v].second;
    rep.per_drop = std::move(per_drop[v]);
    rep.backhaul_per_ap =
        rep.alpha > 0
            ? backhaul_rate(rep.alpha, config.N, config.K, tau_f, T_c_s)
            : 0.0;
    finalize_report(rep);
    result.reports.push_back(std::move(rep));
  }
  return result;
}

ExperimentResult run_experiment(const SimConfig& config, ExecMode mode) {
  validate_config(config);
  return run_experiment_shard(config, 0, config.n_drops, mode);
}

ExperimentResult merge_shards(const std::vector<ExperimentResult>& shards) {
  if (shards.empty())
    throw std::invalid_argument("merge: no shards given");
  std::vector<const ExperimentResult*> order;
  order.reserve(shards.size());
  for (const auto& s : shards) order.push_back(&s);
  std::sort(order.begin(), order.end(),
            [](const ExperimentResult* a, const ExperimentResult* b) {
              return a->drop_begin < b->drop_begin;
            });
  const SimConfig& c = order.front()->config;
  const std::size_t n_var = order.front()->reports.size();
  int next = 0;
  for (const auto* s : order) {
    if (s->config.seed != c.seed || s->config.n_drops != c.n_drops ||
        s->reports.size() != n_var)
      throw std::invalid_argument("merge: shards from different runs");
    if (s->drop_begin != next)
      throw std::invalid_argument("merge: shards are not contiguous");
    next += static_cast<int>(s->reports.front().per_drop.rows());
  }
  if (next != c.n_drops)
    throw std::invalid_argument("merge: shards do not cover all drops");

  ExperimentResult result;
  result.config = c;
  result.drop_begin = 0;
  for (std::size_t v = 0; v < n_var; ++v) {
    RateReport rep;
    rep.kind = order.front()->reports[v].kind;
    rep.alpha = order.front()->reports[v].alpha;
    rep.backhaul_per_ap = order.front()->reports[v].backhaul_per_ap;
    rep.per_drop.resize(c.n_drops, c.K);
    int row = 0;
    for (const auto* s : order) {
      const auto& part = s->reports[v].per_drop;
      rep.per_drop.middleRows(row, part.rows()) = part;
      row += static_cast<int>(part.rows());
    }
    finalize_report(rep);
    result.reports.push_back(std::move(rep));
  }
  return result;
}

std::vector<ReportSummary> summarize(const std::vector<RateReport>& reports) {
  if (reports.empty())
    throw std::invalid_argument("summarize: empty report list");
  std::vector<ReportSummary> out;
  out.reserve(reports.size());
  for (const auto& rep : reports) {
    ReportSummary s;
    s.kind = rep.kind;
    s.alpha = rep.alpha;
    s.avg_rate = rep.avg_rate;
    s.avg_se = rep.avg_se;
    s.backhaul_per_ap = rep.backhaul_per_ap;
    std::vector<double> pooled(rep.per_drop.data(),
                               rep.per_drop.data() + rep.per_drop.size());
    s.outage5 = percentile(std::move(pooled), 5.0);
    out.push_back(s);
  }
  return out;
}

}  // namespace cfsim
