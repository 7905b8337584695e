#include "cfsim/config.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cfsim {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& want) {
  throw std::invalid_argument("config key '" + key + "': cannot parse '" +
                              value + "' as " + want);
}

long long parse_ll(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(value, &used);
  } catch (const std::exception&) {
    bad_value(key, value, "an integer");
  }
  if (used != value.size()) bad_value(key, value, "an integer");
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  const long long v = parse_ll(key, value);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    bad_value(key, value, "an int-range integer");
  return static_cast<int>(v);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(value, &used);
  } catch (const std::exception&) {
    bad_value(key, value, "an unsigned integer");
  }
  if (used != value.size() || value.find('-') != std::string::npos)
    bad_value(key, value, "an unsigned integer");
  return v;
}

double parse_dbl(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    bad_value(key, value, "a number");
  }
  if (used != value.size()) bad_value(key, value, "a number");
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  bad_value(key, value, "a boolean (true/false)");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

using Setter = std::function<void(SimConfig&, const std::string& key,
                                  const std::string& value)>;

const std::map<std::string, Setter>& schema() {
  static const std::map<std::string, Setter> s = {
      {"M", [](SimConfig& c, auto& k, auto& v) { c.M = parse_int(k, v); }},
      {"N", [](SimConfig& c, auto& k, auto& v) { c.N = parse_int(k, v); }},
      {"K", [](SimConfig& c, auto& k, auto& v) { c.K = parse_int(k, v); }},
      {"D_km", [](SimConfig& c, auto& k, auto& v) { c.D_km = parse_dbl(k, v); }},
      {"tau_p",
       [](SimConfig& c, auto& k, auto& v) { c.tau_p = parse_int(k, v); }},
      {"tau_c",
       [](SimConfig& c, auto& k, auto& v) { c.tau_c = parse_int(k, v); }},
      {"T_c_ms",
       [](SimConfig& c, auto& k, auto& v) { c.T_c_ms = parse_dbl(k, v); }},
      {"pilot_power_mW",
       [](SimConfig& c, auto& k, auto& v) { c.pilot_power_mW = parse_dbl(k, v); }},
      {"data_power_mW",
       [](SimConfig& c, auto& k, auto& v) { c.data_power_mW = parse_dbl(k, v); }},
      {"bandwidth_Hz",
       [](SimConfig& c, auto& k, auto& v) { c.bandwidth_Hz = parse_dbl(k, v); }},
      {"noise_figure_dB",
       [](SimConfig& c, auto& k, auto& v) { c.noise_figure_dB = parse_dbl(k, v); }},
      {"sigma_sh_dB",
       [](SimConfig& c, auto& k, auto& v) { c.sigma_sh_dB = parse_dbl(k, v); }},
      {"pathloss_model",
       [](SimConfig& c, auto& k, auto& v) {
         if (v == "three_slope")
           c.pathloss.kind = PathLossModel::Kind::ThreeSlope;
         else if (v == "log_distance")
           c.pathloss.kind = PathLossModel::Kind::LogDistance;
         else
           bad_value(k, v, "one of three_slope, log_distance");
       }},
      {"pathloss_l_fix_dB",
       [](SimConfig& c, auto& k, auto& v) { c.pathloss.l_fix_dB = parse_dbl(k, v); }},
      {"pathloss_d0_m",
       [](SimConfig& c, auto& k, auto& v) { c.pathloss.d0_m = parse_dbl(k, v); }},
      {"pathloss_d1_m",
       [](SimConfig& c, auto& k, auto& v) { c.pathloss.d1_m = parse_dbl(k, v); }},
      {"pathloss_exponent",
       [](SimConfig& c, auto& k, auto& v) { c.pathloss.exponent = parse_dbl(k, v); }},
      {"pathloss_min_dist_m",
       [](SimConfig& c, auto& k, auto& v) { c.pathloss.min_dist_m = parse_dbl(k, v); }},
      {"alpha_list",
       [](SimConfig& c, auto& k, auto& v) {
         c.alpha_list.clear();
         for (const auto& item : split_list(v))
           c.alpha_list.push_back(parse_int(k, item));
       }},
      {"detector_list",
       [](SimConfig& c, auto& k, auto& v) {
         c.detector_list.clear();
         for (const auto& item : split_list(v)) {
           try {
             c.detector_list.push_back(parse_detector(item));
           } catch (const std::exception&) {
             bad_value(k, item, "one of mrc, zf, mmse");
           }
         }
       }},
      {"n_drops",
       [](SimConfig& c, auto& k, auto& v) { c.n_drops = parse_int(k, v); }},
      {"n_inner",
       [](SimConfig& c, auto& k, auto& v) { c.n_inner = parse_int(k, v); }},
      {"seed", [](SimConfig& c, auto& k, auto& v) { c.seed = parse_u64(k, v); }},
      {"overhead_prefactor",
       [](SimConfig& c, auto& k, auto& v) { c.overhead_prefactor = parse_bool(k, v); }},
      {"perfect_backhaul",
       [](SimConfig& c, auto& k, auto& v) { c.perfect_backhaul = parse_bool(k, v); }},
  };
  return s;
}

void apply_pair(SimConfig& config, const std::string& key,
                const std::string& value) {
  const auto it = schema().find(key);
  if (it == schema().end())
    throw std::invalid_argument("unknown config key: " + key);
  it->second(config, key, value);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

SimConfig parse_config_text(const std::string& text,
                            const std::vector<std::string>& overrides) {
  SimConfig config;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key=value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": empty key");
    if (!seen.insert(key).second)
      throw std::invalid_argument("duplicate config key: " + key);
    apply_pair(config, key, value);
  }
  for (const auto& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("override '" + ov +
                                  "': expected key=value");
    apply_pair(config, trim(ov.substr(0, eq)), trim(ov.substr(eq + 1)));
  }
  validate_config(config);
  return config;
}

SimConfig load_config(const std::string& path,
                      const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), overrides);
}

std::string config_to_text(const SimConfig& c) {
  std::ostringstream out;
  out << "M=" << c.M << "\n";
  out << "N=" << c.N << "\n";
  out << "K=" << c.K << "\n";
  out << "D_km=" << format_double(c.D_km) << "\n";
  out << "tau_p=" << c.tau_p << "\n";
  out << "tau_c=" << c.tau_c << "\n";
  out << "T_c_ms=" << format_double(c.T_c_ms) << "\n";
  out << "pilot_power_mW=" << format_double(c.pilot_power_mW) << "\n";
  out << "data_power_mW=" << format_double(c.data_power_mW) << "\n";
  out << "bandwidth_Hz=" << format_double(c.bandwidth_Hz) << "\n";
  out << "noise_figure_dB=" << format_double(c.noise_figure_dB) << "\n";
  out << "sigma_sh_dB=" << format_double(c.sigma_sh_dB) << "\n";
  out << "pathloss_model="
      << (c.pathloss.kind == PathLossModel::Kind::ThreeSlope ? "three_slope"
                                                             : "log_distance")
      << "\n";
  out << "pathloss_l_fix_dB=" << format_double(c.pathloss.l_fix_dB) << "\n";
  out << "pathloss_d0_m=" << format_double(c.pathloss.d0_m) << "\n";
  out << "pathloss_d1_m=" << format_double(c.pathloss.d1_m) << "\n";
  out << "pathloss_exponent=" << format_double(c.pathloss.exponent) << "\n";
  out << "pathloss_min_dist_m=" << format_double(c.pathloss.min_dist_m) << "\n";
  out << "alpha_list=";
  for (std::size_t i = 0; i < c.alpha_list.size(); ++i)
    out << (i ? "," : "") << c.alpha_list[i];
  out << "\n";
  out << "detector_list=";
  for (std::size_t i = 0; i < c.detector_list.size(); ++i)
    out << (i ? "," : "") << detector_name(c.detector_list[i]);
  out << "\n";
  out << "n_drops=" << c.n_drops << "\n";
  out << "n_inner=" << c.n_inner << "\n";
  out << "seed=" << c.seed << "\n";
  out << "overhead_prefactor=" << (c.overhead_prefactor ? "true" : "false")
      << "\n";
  out << "perfect_backhaul=" << (c.perfect_backhaul ? "true" : "false")
      << "\n";
  return out.str();
}

}  // namespace cfsim
