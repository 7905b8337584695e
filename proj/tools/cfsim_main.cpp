#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cfsim/config.hpp"
#include "cfsim/oracle.hpp"
#include "cfsim/output.hpp"
#include "cfsim/simulator.hpp"

namespace {

// "1..9" or "1,3,5"
std::vector<int> parse_alpha_spec(const std::string& spec) {
  std::vector<int> out;
  const auto dots = spec.find("..");
  if (dots != std::string::npos) {
    const int a = std::stoi(spec.substr(0, dots));
    const int b = std::stoi(spec.substr(dots + 2));
    if (a > b) throw std::invalid_argument("alpha range is empty: " + spec);
    for (int v = a; v <= b; ++v) out.push_back(v);
    return out;
  }
  std::istringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  if (out.empty()) throw std::invalid_argument("empty alpha list: " + spec);
  return out;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
}

int run_table1(const std::string& alpha_spec, const std::string& out_path) {
  emit(cfsim::build_table1_csv(parse_alpha_spec(alpha_spec)), out_path);
  return 0;
}

int run_experiment_cmd(const std::string& config_path,
                       std::vector<std::string> overrides, bool paper_scale,
                       bool serial, const std::string& out_dir) {
  if (paper_scale)
    overrides.insert(overrides.begin(), "n_drops=300");
  const cfsim::SimConfig config = cfsim::load_config(config_path, overrides);
  const auto mode =
      serial ? cfsim::ExecMode::Serial : cfsim::ExecMode::Parallel;
  const cfsim::ExperimentResult result = cfsim::run_experiment(config, mode);
  const cfsim::OutputBundle bundle = cfsim::build_outputs(result);
  cfsim::write_outputs(out_dir, bundle);

  std::printf("%-8s %5s %12s %10s %12s %14s\n", "detector", "alpha",
              "avg_rate", "se", "outage5", "backhaul_Mbps");
  for (const auto& s : cfsim::summarize(result.reports)) {
    std::printf("%-8s %5d %12.4f %10.4f %12.4f %14.4f\n",
                cfsim::detector_name(s.kind).c_str(), s.alpha, s.avg_rate,
                s.avg_se, s.outage5, s.backhaul_per_ap / 1e6);
  }
  std::printf("wrote %s/{table1,rates,cdf}.csv and summary.json\n",
              out_dir.c_str());
  return 0;
}

int run_oracle(int n, std::uint64_t seed, int alpha, bool realized) {
  cfsim::OracleConfig cfg;
  cfg.n = n;
  cfg.seed = seed;
  cfg.alpha = alpha;
  cfg.realized = realized;
  const cfsim::OracleReport report = cfsim::run_sinr_oracle(cfg);

  std::printf("sinr oracle: n=%d seed=%llu alpha=%d mode=%s\n", cfg.n,
              static_cast<unsigned long long>(cfg.seed), cfg.alpha,
              cfg.realized ? "realized" : "model");
  for (const auto& e : report.entries) {
    double max_corr = 0.0;
    for (int i = 0; i < 6; ++i)
      for (int j = i + 1; j < 6; ++j)
        max_corr = std::max(max_corr, e.corr(i, j));
    std::printf("%-5s user %d: recon=%.3e max_offdiag_corr=%.4f\n",
                cfsim::detector_name(e.kind).c_str(), e.user,
                e.recon_residual, max_corr);
    for (int i = 0; i < 6; ++i) {
      std::printf("  A%d: mc=%.6e cf=%.6e z=%+.2f%s\n", i + 1, e.mc_power(i),
                  e.cf_power(i), e.z(i),
                  e.degenerate[static_cast<std::size_t>(i)] ? " (degenerate)"
                                                            : "");
    }
  }
  if (alpha >= 1) {
    const cfsim::RemarkReport r = cfsim::run_remark_checks(alpha, n, seed);
    std::printf(
        "remark checks (n=%d): corr(input,e_y)=%.4f corr(output,e_g)=%.4f "
        "|mean e_g| z=%.2f\n",
        r.n, r.corr_input_error_y, r.corr_output_error_g, r.mean_error_g_z);
  }
  return 0;
}

int run_backhaul(int alpha, int N, int K, int tau_f, double Tc_ms) {
  const double rate =
      cfsim::backhaul_rate(alpha, N, K, tau_f, Tc_ms * 1e-3);
  std::printf("%.10g\n", rate);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cell-free massive MIMO uplink simulator with quantized fronthaul"};
  app.require_subcommand(1);

  auto* t1 = app.add_subcommand("table1", "print the quantizer design table");
  std::string alpha_spec = "1..9";
  std::string t1_out;
  t1->add_option("--alpha", alpha_spec, "resolutions, e.g. 1..9 or 1,2,3");
  t1->add_option("-o,--output", t1_out, "write CSV here instead of stdout");

  auto* run = app.add_subcommand("run", "run a rate experiment from a config");
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = "out";
  bool paper_scale = false;
  bool serial = false;
  run->add_option("--config", config_path, "config file (key=value lines)")
      ->envname("CFSIM_CONFIG")
      ->required();
  run->add_option("--set", overrides, "override config entries, key=value");
  run->add_option("-o,--output", out_dir, "output directory");
  run->add_flag("--paper-scale", paper_scale,
                "use 300 network drops (overrides n_drops)");
  run->add_flag("--serial", serial, "disable the OpenMP drop loop");

  auto* oracle = app.add_subcommand(
      "sinr-oracle", "Monte Carlo check of the SINR term decomposition");
  int o_n = 100000;
  std::uint64_t o_seed = 11;
  int o_alpha = 3;
  bool o_realized = false;
  oracle->add_option("--n", o_n, "realizations");
  oracle->add_option("--seed", o_seed, "rng seed");
  oracle->add_option("--alpha", o_alpha, "fronthaul bits (0 = perfect)");
  oracle->add_flag("--realized", o_realized,
                   "split by realized quantizer errors instead of the model");

  auto* bh = app.add_subcommand("backhaul", "print one backhaul rate in bit/s");
  int b_alpha = 0, b_N = 0, b_K = 0, b_tau_f = 0;
  double b_Tc_ms = 0.0;
  bh->add_option("--alpha", b_alpha, "bits per sample dimension")->required();
  bh->add_option("--N", b_N, "antennas per AP")->required();
  bh->add_option("--K", b_K, "users")->required();
  bh->add_option("--tau-f", b_tau_f, "payload symbols per coherence block")
      ->required();
  bh->add_option("--Tc-ms", b_Tc_ms, "coherence time in ms")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (t1->parsed()) return run_table1(alpha_spec, t1_out);
    if (run->parsed())
      return run_experiment_cmd(config_path, overrides, paper_scale, serial,
                                out_dir);
    if (oracle->parsed()) return run_oracle(o_n, o_seed, o_alpha, o_realized);
    if (bh->parsed()) return run_backhaul(b_alpha, b_N, b_K, b_tau_f, b_Tc_ms);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
