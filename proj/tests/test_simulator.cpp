#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "cfsim/output.hpp"
#include "cfsim/simulator.hpp"

using namespace cfsim;

namespace {

// Small enough to run in seconds, large enough that every code path
// (estimation, quantization, all detectors) is exercised.
SimConfig tiny_config() {
  SimConfig c;
  c.M = 3;
  c.N = 2;
  c.K = 4;
  c.D_km = 0.5;
  c.tau_p = 4;
  c.alpha_list = {2, 5};
  c.n_drops = 3;
  c.n_inner = 4;
  c.seed = 7;
  return c;
}

const RateReport& find_report(const ExperimentResult& r, DetectorKind kind,
                              int alpha) {
  for (const auto& rep : r.reports)
    if (rep.kind == kind && rep.alpha == alpha) return rep;
  throw std::runtime_error("report not found");
}

}  // namespace

TEST_CASE("identical config and seed reproduce every number") {
  const SimConfig c = tiny_config();
  const ExperimentResult a = run_experiment(c);
  const ExperimentResult b = run_experiment(c);
  REQUIRE(a.reports.size() == b.reports.size());
  for (std::size_t i = 0; i < a.reports.size(); ++i) {
    CHECK(a.reports[i].kind == b.reports[i].kind);
    CHECK(a.reports[i].alpha == b.reports[i].alpha);
    CHECK(a.reports[i].per_drop == b.reports[i].per_drop);
  }
  CHECK(build_rates_csv(a) == build_rates_csv(b));
}

TEST_CASE("a different seed changes the rates") {
  SimConfig c = tiny_config();
  const ExperimentResult a = run_experiment(c);
  c.seed = 8;
  const ExperimentResult b = run_experiment(c);
  CHECK(a.reports[0].per_drop != b.reports[0].per_drop);
}

TEST_CASE("parallel and serial schedules agree bitwise") {
  const SimConfig c = tiny_config();
  const ExperimentResult par = run_experiment(c, ExecMode::Parallel);
  const ExperimentResult ser = run_experiment(c, ExecMode::Serial);
  REQUIRE(par.reports.size() == ser.reports.size());
  for (std::size_t i = 0; i < par.reports.size(); ++i)
    CHECK(par.reports[i].per_drop == ser.reports[i].per_drop);
}

TEST_CASE("shards merge back to the full run") {
  const SimConfig c = tiny_config();
  const ExperimentResult full = run_experiment(c);
  const ExperimentResult s0 = run_experiment_shard(c, 0, 1);
  const ExperimentResult s1 = run_experiment_shard(c, 1, 3);
  // Order of presentation must not matter.
  const ExperimentResult merged = merge_shards({s1, s0});
  REQUIRE(merged.reports.size() == full.reports.size());
  CHECK(merged.drop_begin == 0);
  for (std::size_t i = 0; i < full.reports.size(); ++i) {
    CHECK(merged.reports[i].per_drop == full.reports[i].per_drop);
    CHECK(merged.reports[i].avg_rate ==
          doctest::Approx(full.reports[i].avg_rate).epsilon(1e-15));
  }
  CHECK(build_rates_csv(merged) == build_rates_csv(full));

  CHECK_THROWS(merge_shards({s0, s0}));  // overlapping
  SimConfig other = c;
  other.seed = 99;
  CHECK_THROWS(merge_shards({s0, run_experiment_shard(other, 1, 3)}));
}

TEST_CASE("baseline mmse dominates the other detectors pointwise") {
  // With perfect backhaul the mmse columns maximize each user's model SINR
  // exactly, so dominance holds rate by rate, not just on average.
  SimConfig c = tiny_config();
  c.n_drops = 4;
  const ExperimentResult r = run_experiment(c);
  const auto& mmse = find_report(r, DetectorKind::MMSE, 0);
  const auto& zf = find_report(r, DetectorKind::ZF, 0);
  const auto& mrc = find_report(r, DetectorKind::MRC, 0);
  for (Eigen::Index d = 0; d < mmse.per_drop.rows(); ++d)
    for (Eigen::Index k = 0; k < mmse.per_drop.cols(); ++k) {
      CHECK(mmse.per_drop(d, k) >= zf.per_drop(d, k) - 1e-9);
      CHECK(mmse.per_drop(d, k) >= mrc.per_drop(d, k) - 1e-9);
    }
}

TEST_CASE("average rate is monotone in alpha within monte carlo noise") {
  SimConfig c = tiny_config();
  c.M = 4;
  c.K = 6;
  c.tau_p = 6;
  c.alpha_list = {1, 2, 3, 4, 6, 8, 12};
  c.n_drops = 30;
  c.n_inner = 20;
  const ExperimentResult r = run_experiment(c);
  for (DetectorKind kind :
       {DetectorKind::MRC, DetectorKind::ZF, DetectorKind::MMSE}) {
    const auto& base = find_report(r, kind, 0);
    double prev = -1.0, prev_se = 0.0;
    for (int alpha : c.alpha_list) {
      const auto& rep = find_report(r, kind, alpha);
      CHECK(rep.avg_rate >= prev - 2.0 * (rep.avg_se + prev_se));
      // Baseline dominance: quantization cannot help.
      CHECK(rep.avg_rate <= base.avg_rate + 2.0 * (rep.avg_se + base.avg_se));
      prev = rep.avg_rate;
      prev_se = rep.avg_se;
    }
  }
}

TEST_CASE("backhaul per ap matches the closed form") {
  SimConfig c = tiny_config();
  c.alpha_list = {8};
  c.n_drops = 1;
  c.n_inner = 1;
  const ExperimentResult r = run_experiment(c);
  const double tau_f = c.tau_c - c.tau_p;
  for (const auto& rep : r.reports) {
    if (rep.alpha == 0)
      CHECK(rep.backhaul_per_ap == 0.0);
    else
      CHECK(rep.backhaul_per_ap ==
            backhaul_rate(rep.alpha, c.N, c.K, static_cast<int>(tau_f),
                          c.T_c_ms * 1e-3));
  }
}

TEST_CASE("failures name the drop where they happened") {
  SimConfig c = tiny_config();
  c.M = 1;
  c.N = 1;
  c.K = 3;  // MN < K: zf cannot exist
  c.tau_p = 3;
  c.detector_list = {DetectorKind::ZF};
  try {
    run_experiment(c);
    FAIL("expected a throw");
  } catch (const std::exception& e) {
    const std::string msg = e.what();
    CHECK(msg.find("drop 0") != std::string::npos);
    CHECK(msg.find("realization") != std::string::npos);
  }
}

TEST_CASE("summarize averages and outage") {
  RateReport rep;
  rep.kind = DetectorKind::MRC;
  rep.alpha = 3;
  rep.per_drop.resize(1, 4);
  rep.per_drop << 1.0, 2.0, 3.0, 4.0;
  rep.per_user = rep.per_drop.colwise().mean();
  rep.avg_rate = 2.5;
  const auto s = summarize({rep});
  REQUIRE(s.size() == 1);
  CHECK(s[0].avg_rate == doctest::Approx(2.5));
  CHECK(s[0].outage5 == doctest::Approx(percentile({1.0, 2.0, 3.0, 4.0}, 5.0)));
  CHECK_THROWS(summarize({}));
}

TEST_CASE("percentile matches a sort oracle") {
  Rng rng(3);
  std::vector<double> v(101);
  for (auto& x : v) x = randn(rng);
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  // With 101 points the p-th percentile sits exactly on an order statistic.
  for (double p : {0.0, 5.0, 25.0, 50.0, 97.0, 100.0})
    CHECK(percentile(v, p) ==
          doctest::Approx(sorted[static_cast<std::size_t>(p)]).epsilon(1e-12));
  // Interpolated case, computed by hand: 4 points, p=40 -> index 1.2.
  CHECK(percentile({1.0, 2.0, 3.0, 4.0}, 40.0) == doctest::Approx(2.2));
  CHECK_THROWS(percentile({}, 50.0));
  CHECK_THROWS(percentile({1.0}, 101.0));
}

TEST_CASE("validate_config names the offending key") {
  const auto message_of = [](SimConfig c) -> std::string {
    try {
      validate_config(c);
      return "";
    } catch (const std::exception& e) {
      return e.what();
    }
  };
  SimConfig c = tiny_config();
  c.tau_p = 500;
  CHECK(message_of(c).find("tau_p") != std::string::npos);
  c = tiny_config();
  c.alpha_list = {17};
  CHECK(message_of(c).find("alpha_list") != std::string::npos);
  c = tiny_config();
  c.alpha_list = {3, 3};
  CHECK(message_of(c).find("duplicate") != std::string::npos);
  c = tiny_config();
  c.detector_list = {};
  CHECK(message_of(c).find("detector_list") != std::string::npos);
  c = tiny_config();
  c.n_drops = 0;
  CHECK(message_of(c).find("n_drops") != std::string::npos);
  c = tiny_config();
  c.tau_p = c.tau_c;  // leaves no payload symbols for quantized variants
  CHECK(message_of(c).find("tau_f") != std::string::npos);
  CHECK(message_of(tiny_config()).empty());
}
