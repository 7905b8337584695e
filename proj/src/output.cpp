#include "cfsim/output.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cfsim/config.hpp"
#include "cfsim/quantizer.hpp"

namespace cfsim {

namespace {

std::string csv_num(double v) { return format_double(v); }

// FNV-1a 64-bit, stable across platforms. Used only as a run fingerprint.
std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex16(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

std::string build_table1_csv(const std::vector<int>& alphas) {
  std::ostringstream out;
  out << "alpha,delta_opt,a_tilde,b_tilde,var_bussgang,var_max\n";
  for (int alpha : alphas) {
    const QuantizerDesign d = optimize_step_size(alpha, QuantizerModel::Bussgang);
    out << alpha << ',' << csv_num(d.delta) << ',' << csv_num(d.a_tilde)
        << ',' << csv_num(d.b_tilde) << ',' << csv_num(d.var_bussgang) << ','
        << csv_num(d.var_max) << "\n";
  }
  return out.str();
}

std::string build_rates_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "detector,alpha,drop,user,rate_bits_per_s_per_Hz\n";
  for (const RateReport& rep : result.reports) {
    const std::string name = detector_name(rep.kind);
    for (Eigen::Index d = 0; d < rep.per_drop.rows(); ++d)
      for (Eigen::Index k = 0; k < rep.per_drop.cols(); ++k)
        out << name << ',' << rep.alpha << ',' << (result.drop_begin + d)
            << ',' << k << ',' << csv_num(rep.per_drop(d, k)) << "\n";
  }
  return out.str();
}

std::string build_cdf_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "detector,alpha,rate,empirical_cdf\n";
  for (const RateReport& rep : result.reports) {
    const std::string name = detector_name(rep.kind);
    std::vector<double> pooled;
    pooled.reserve(static_cast<std::size_t>(rep.per_drop.size()));
    for (Eigen::Index d = 0; d < rep.per_drop.rows(); ++d)
      for (Eigen::Index k = 0; k < rep.per_drop.cols(); ++k)
        pooled.push_back(rep.per_drop(d, k));
    std::sort(pooled.begin(), pooled.end());
    const double n = static_cast<double>(pooled.size());
    for (std::size_t i = 0; i < pooled.size(); ++i)
      out << name << ',' << rep.alpha << ',' << csv_num(pooled[i]) << ','
          << csv_num((static_cast<double>(i) + 1.0) / n) << "\n";
  }
  return out.str();
}

std::string build_summary_json(const ExperimentResult& result,
                               const std::string& rates_csv) {
  const std::string config_text = config_to_text(result.config);
  nlohmann::ordered_json j;
  j["run_id"] = hex16(fnv1a(config_text + rates_csv));
  j["seed"] = result.config.seed;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  std::istringstream lines(config_text);
  std::string line;
  while (std::getline(lines, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    cfg[line.substr(0, eq)] = line.substr(eq + 1);
  }
  j["config"] = cfg;
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (const ReportSummary& s : summarize(result.reports)) {
    nlohmann::ordered_json e;
    e["detector"] = detector_name(s.kind);
    e["alpha"] = s.alpha;
    e["avg_rate_bits_per_s_per_Hz"] = s.avg_rate;
    e["avg_rate_se"] = s.avg_se;
    e["outage5_rate"] = s.outage5;
    e["backhaul_bits_per_s_per_ap"] = s.backhaul_per_ap;
    entries.push_back(std::move(e));
  }
  j["summaries"] = std::move(entries);
  return j.dump(2) + "\n";
}

OutputBundle build_outputs(const ExperimentResult& result) {
  OutputBundle bundle;
  std::vector<int> alphas = result.config.alpha_list;
  std::sort(alphas.begin(), alphas.end());
  bundle.table1_csv = build_table1_csv(alphas);
  bundle.rates_csv = build_rates_csv(result);
  bundle.cdf_csv = build_cdf_csv(result);
  bundle.summary_json = build_summary_json(result, bundle.rates_csv);
  return bundle;
}

void write_outputs(const std::string& dir, const OutputBundle& bundle) {
  const std::filesystem::path root(dir);
  std::filesystem::create_directories(root);
  write_file(root / "table1.csv", bundle.table1_csv);
  write_file(root / "rates.csv", bundle.rates_csv);
  write_file(root / "cdf.csv", bundle.cdf_csv);
  write_file(root / "summary.json", bundle.summary_json);
}

}  // namespace cfsim
