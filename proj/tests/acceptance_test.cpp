// Acceptance gate. Each criterion prints exactly one [PASS]/[FAIL] line;
// run with --criterion N for a single one, or no arguments for all eight.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numbers>
#include <string>
#include <vector>

#include "cfsim/config.hpp"
#include "cfsim/oracle.hpp"
#include "cfsim/output.hpp"
#include "cfsim/quantizer.hpp"
#include "cfsim/simulator.hpp"

using namespace cfsim;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool check(bool ok, const char* what, double got, double bound) {
  if (!ok) std::printf("  violated: %s (got %.6g, bound %.6g)\n", what, got, bound);
  return ok;
}

const RateReport& find_report(const ExperimentResult& r, DetectorKind kind,
                              int alpha) {
  for (const auto& rep : r.reports)
    if (rep.kind == kind && rep.alpha == alpha) return rep;
  throw std::runtime_error("report not found");
}

constexpr DetectorKind kKinds[] = {DetectorKind::MRC, DetectorKind::ZF,
                                   DetectorKind::MMSE};

SimConfig desk_config(int M, int N, int K, int tau_p,
                      std::vector<int> alphas) {
  SimConfig c;
  c.M = M;
  c.N = N;
  c.K = K;
  c.D_km = 1.0;
  c.tau_p = tau_p;
  c.tau_c = 200;
  c.alpha_list = std::move(alphas);
  c.n_drops = 50;
  c.n_inner = 50;
  c.seed = 1;
  return c;
}

// ---- criterion 1: published uniform-quantizer design table, alpha 1..9 ----

struct TableRow {
  int alpha;
  double delta, var_b, a, var_max;  // var_max < 0: not tabulated
};
constexpr TableRow kDesignTable[] = {
    {1, 1.596, 0.2313, 0.6366, 0.3634},
    {2, 0.9957, 0.10472, 0.88115, 0.1188},
    {3, 0.586, 0.036037, 0.96256, 0.03744},
    {4, 0.3352, 0.011409, 0.98845, 0.01154},
    {5, 0.1881, 0.003482, 0.996505, 0.00349},
    {6, 0.1041, 0.0010389, 0.99896, -1},
    {7, 0.0568, 0.0003042, 0.99969, -1},
    {8, 0.0307, 0.0000876, 0.999912, -1},
    {9, 0.0165, 0.0000249, 0.999975, -1},
};

bool criterion1() {
  const auto t0 = Clock::now();
  bool ok = true;
  for (const auto& row : kDesignTable) {
    const QuantizerDesign d =
        optimize_step_size(row.alpha, QuantizerModel::Bussgang);
    ok &= check(std::abs(d.delta - row.delta) < 0.002, "delta_opt", d.delta,
                row.delta);
    ok &= check(std::abs(d.a_tilde - row.a) < 0.001, "a_tilde", d.a_tilde,
                row.a);
    ok &= check(std::abs(d.var_bussgang - row.var_b) < 0.0005, "var_bussgang",
                d.var_bussgang, row.var_b);
    if (row.var_max > 0)
      ok &= check(std::abs(d.var_max - row.var_max) < 0.0005, "var_max",
                  d.var_max, row.var_max);
  }
  const double dt = seconds_since(t0);
  ok &= check(dt < 5.0, "runtime (s)", dt, 5.0);
  std::printf("[%s] criterion 1: design table alpha=1..9, four columns "
              "(%.2fs)\n", ok ? "PASS" : "FAIL", dt);
  return ok;
}

// ---- criterion 2: one-bit gain closed form ----

bool criterion2() {
  const double delta = 1.596;
  const double closed = 0.5 * delta * std::sqrt(2.0 / std::numbers::pi);
  const auto [a, b] = bussgang_coefficients(1, delta);
  bool ok = check(std::abs(a - closed) < 1e-6, "pipeline vs closed form",
                  a, closed);
  ok &= check(std::abs(a - 0.6366) < 1e-3, "tabulated value", a, 0.6366);
  (void)b;
  std::printf("[%s] criterion 2: one-bit gain (delta/2)sqrt(2/pi) matches "
              "the numeric pipeline\n", ok ? "PASS" : "FAIL");
  return ok;
}

// ---- criterion 3: backhaul rate, exact arithmetic ----

bool criterion3() {
  const double r1 = backhaul_rate(10, 25, 40, 160, 1e-3);
  const double r2 = backhaul_rate(8, 25, 40, 170, 1e-3);
  bool ok = check(r1 == 1e8, "alpha=10 tau_f=160 case", r1, 1e8);
  ok &= check(r2 == 8.4e7, "alpha=8 tau_f=170 case", r2, 8.4e7);
  std::printf("[%s] criterion 3: backhaul formula returns exactly 100 and 84 "
              "Mbit/s on the two reference setups\n", ok ? "PASS" : "FAIL");
  return ok;
}

// ---- criterion 4: uncorrelation suite on the tiny instance ----

bool criterion4() {
  const auto t0 = Clock::now();
  OracleConfig cfg;
  cfg.n = 100000;
  cfg.seed = 29;
  cfg.alpha = 3;
  cfg.realized = false;  // the statistical model the rate bound lives in
  const double bound = 4.0 / std::sqrt(static_cast<double>(cfg.n));
  const OracleReport rep = run_sinr_oracle(cfg);
  bool ok = true;
  double worst = 0.0;
  for (const auto& e : rep.entries) {
    for (int i = 0; i < 6; ++i)
      for (int j = i + 1; j < 6; ++j) worst = std::max(worst, e.corr(i, j));
    ok &= check(e.recon_residual < 1e-12, "term reconstruction residual",
                e.recon_residual, 1e-12);
  }
  ok &= check(worst < bound, "max pairwise |corr| among A terms", worst, bound);
  const RemarkReport rm = run_remark_checks(cfg.alpha, cfg.n, cfg.seed);
  ok &= check(rm.corr_input_error_y < bound,
              "signal quantizer error vs input |corr|", rm.corr_input_error_y,
              bound);
  ok &= check(rm.corr_output_error_g < bound,
              "estimate quantizer error vs output |corr|",
              rm.corr_output_error_g, bound);
  const double dt = seconds_since(t0);
  ok &= check(dt < 60.0, "runtime (s)", dt, 60.0);
  std::printf("[%s] criterion 4: all pairwise correlations below 4/sqrt(n) "
              "at n=1e5 (worst %.4f vs %.4f; %.2fs)\n",
              ok ? "PASS" : "FAIL", worst, bound, dt);
  return ok;
}

// ---- criterion 5: monte carlo term powers match the closed forms ----

bool criterion5() {
  const auto t0 = Clock::now();
  OracleConfig cfg;
  cfg.n = 200000;
  cfg.seed = 11;
  cfg.alpha = 3;
  cfg.realized = false;
  const OracleReport rep = run_sinr_oracle(cfg);
  bool ok = true;
  double worst = 0.0;
  for (const auto& e : rep.entries)
    for (int i = 0; i < 6; ++i) {
      if (e.degenerate[static_cast<std::size_t>(i)]) continue;
      worst = std::max(worst, std::abs(e.z(i)));
      ok &= check(std::abs(e.z(i)) <= 3.0, "term power z-score",
                  e.z(i), 3.0);
    }
  const double dt = seconds_since(t0);
  ok &= check(dt < 120.0, "runtime (s)", dt, 120.0);
  std::printf("[%s] criterion 5: every term power within 3 standard errors "
              "of its closed form, all detectors (worst |z| %.2f; %.2fs)\n",
              ok ? "PASS" : "FAIL", worst, dt);
  return ok;
}

// ---- criterion 6: 12-bit fronthaul is transparent ----

bool criterion6() {
  const auto t0 = Clock::now();
  const SimConfig c = desk_config(5, 20, 40, 40, {12});
  const ExperimentResult r = run_experiment(c);
  bool ok = true;
  double worst = 0.0;
  for (DetectorKind kind : kKinds) {
    const auto& base = find_report(r, kind, 0);
    const auto& q12 = find_report(r, kind, 12);
    for (Eigen::Index k = 0; k < base.per_user.size(); ++k) {
      const double rel =
          std::abs(q12.per_user(k) - base.per_user(k)) / base.per_user(k);
      worst = std::max(worst, rel);
      ok &= check(rel < 0.01, "per-user relative gap at alpha=12", rel, 0.01);
    }
  }
  const double dt = seconds_since(t0);
  ok &= check(dt < 120.0, "runtime (s)", dt, 120.0);
  std::printf("[%s] criterion 6: alpha=12 rates match the unquantized "
              "pipeline within 1%% per user (worst %.4f%%; %.2fs)\n",
              ok ? "PASS" : "FAIL", 100.0 * worst, dt);
  return ok;
}

// ---- criterion 7: trend reproduction at desk scale ----

int alpha_threshold(const ExperimentResult& r, DetectorKind kind,
                    const std::vector<int>& alphas) {
  const double target = 0.98 * find_report(r, kind, 0).avg_rate;
  for (int alpha : alphas)
    if (find_report(r, kind, alpha).avg_rate >= target) return alpha;
  return 99;  // never reached within the sweep
}

bool cdf_trend(const ExperimentResult& r, int alpha, const char* label) {
  bool ok = true;
  for (DetectorKind kind : kKinds) {
    const auto& base = find_report(r, kind, 0);
    const auto& quant = find_report(r, kind, alpha);
    for (double p : {5.0, 50.0, 95.0}) {
      std::vector<double> pooled_b, pooled_q, drop_pct;
      for (Eigen::Index d = 0; d < base.per_drop.rows(); ++d) {
        std::vector<double> row_b, row_q;
        for (Eigen::Index k = 0; k < base.per_drop.cols(); ++k) {
          pooled_b.push_back(base.per_drop(d, k));
          pooled_q.push_back(quant.per_drop(d, k));
          row_b.push_back(base.per_drop(d, k));
        }
        drop_pct.push_back(percentile(row_b, p));
      }
      // Monte Carlo band of the baseline percentile: drops are the only
      // independent unit, so n_eff = n_drops (users within a drop share
      // shadowing and interference).
      double mean = 0.0, var = 0.0;
      for (double v : drop_pct) mean += v;
      mean /= static_cast<double>(drop_pct.size());
      for (double v : drop_pct) var += (v - mean) * (v - mean);
      var /= static_cast<double>(drop_pct.size() - 1);
      const double se = std::sqrt(var / static_cast<double>(drop_pct.size()));
      const double gap =
          std::abs(percentile(pooled_q, p) - percentile(pooled_b, p));
      char what[128];
      std::snprintf(what, sizeof(what), "%s %s p%.0f CDF gap vs 3 SE band",
                    label, detector_name(kind).c_str(), p);
      ok &= check(gap <= 3.0 * se, what, gap, 3.0 * se);
    }
  }
  return ok;
}

bool criterion7() {
  const auto t0 = Clock::now();
  const std::vector<int> ladder = {1, 2, 3, 4, 5, 6, 7, 8, 9, 12};

  // (a) few large APs: MRC saturates by alpha=4, ZF and MMSE do not.
  const ExperimentResult fig1 =
      run_experiment(desk_config(5, 20, 40, 40, ladder));
  bool ok = true;
  const auto ratio4 = [&](const ExperimentResult& r, DetectorKind kind) {
    return find_report(r, kind, 4).avg_rate /
           find_report(r, kind, 12).avg_rate;
  };
  const double mrc4 = ratio4(fig1, DetectorKind::MRC);
  const double zf4 = ratio4(fig1, DetectorKind::ZF);
  const double mmse4 = ratio4(fig1, DetectorKind::MMSE);
  ok &= check(mrc4 >= 0.98, "mrc alpha=4 over alpha=12", mrc4, 0.98);
  ok &= check(zf4 < 0.98, "zf alpha=4 over alpha=12", zf4, 0.98);
  ok &= check(mmse4 < 0.98, "mmse alpha=4 over alpha=12", mmse4, 0.98);
  std::printf("  (a) alpha4/alpha12: mrc %.4f zf %.4f mmse %.4f\n", mrc4, zf4,
              mmse4);

  // (b) many small APs reach the baseline with no more bits than (a).
  const ExperimentResult fig2 =
      run_experiment(desk_config(100, 2, 40, 30, ladder));
  for (DetectorKind kind : kKinds) {
    const int need1 = alpha_threshold(fig1, kind, ladder);
    const int need2 = alpha_threshold(fig2, kind, ladder);
    std::printf("  (b) %s reaches 98%% of baseline at alpha %d (few-AP: %d)\n",
                detector_name(kind).c_str(), need2, need1);
    char what[96];
    std::snprintf(what, sizeof(what), "%s threshold alpha, many vs few APs",
                  detector_name(kind).c_str());
    ok &= check(need2 <= need1, what, need2, need1);
  }

  // (c) CDFs at alpha=10 (orthogonal pilots) and alpha=8 (random pilots)
  // sit inside the baseline's Monte Carlo band.
  const ExperimentResult fig3 =
      run_experiment(desk_config(10, 25, 40, 40, {10}));
  ok &= cdf_trend(fig3, 10, "(c) alpha10");
  const ExperimentResult fig4 =
      run_experiment(desk_config(10, 25, 40, 30, {8}));
  ok &= cdf_trend(fig4, 8, "(c) alpha8");

  const double dt = seconds_since(t0);
  ok &= check(dt < 900.0, "runtime (s)", dt, 900.0);
  std::printf("[%s] criterion 7: rate-vs-resolution and CDF trends at desk "
              "scale (%.0fs)\n", ok ? "PASS" : "FAIL", dt);
  return ok;
}

// ---- criterion 8: byte-level determinism and shard equivalence ----

bool criterion8() {
  SimConfig c = desk_config(4, 3, 6, 6, {1, 6});
  c.n_drops = 4;
  c.n_inner = 5;
  const ExperimentResult full = run_experiment(c);
  const std::string csv1 = build_rates_csv(full);
  const std::string csv2 = build_rates_csv(run_experiment(c));
  bool ok = check(csv1 == csv2, "rerun rates csv identical",
                  csv1 == csv2 ? 1 : 0, 1);
  const ExperimentResult merged = merge_shards(
      {run_experiment_shard(c, 2, 4), run_experiment_shard(c, 0, 2)});
  const bool shard_eq = build_rates_csv(merged) == csv1;
  ok &= check(shard_eq, "sharded equals serial", shard_eq ? 1 : 0, 1);
  const bool serial_eq =
      build_rates_csv(run_experiment(c, ExecMode::Serial)) == csv1;
  ok &= check(serial_eq, "serial mode equals parallel", serial_eq ? 1 : 0, 1);
  std::printf("[%s] criterion 8: rerun, shards and serial mode all "
              "byte-identical\n", ok ? "PASS" : "FAIL");
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  int which = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
      which = std::atoi(argv[++i]);
  }
  bool (*criteria[])() = {criterion1, criterion2, criterion3, criterion4,
                          criterion5, criterion6, criterion7, criterion8};
  bool all_ok = true;
  try {
    if (which >= 1 && which <= 8) {
      all_ok = criteria[which - 1]();
    } else {
      for (auto* fn : criteria) all_ok &= fn();
    }
  } catch (const std::exception& e) {
    std::printf("[FAIL] unexpected exception: %s\n", e.what());
    return 1;
  }
  return all_ok ? 0 : 1;
}
