#pragma once

#include <string>
#include <vector>

#include "cfsim/simulator.hpp"

namespace cfsim {

// Rendered artifacts for one experiment. All four are plain text; callers
// can print them or hand them to write_outputs.
struct OutputBundle {
  std::string table1_csv;
  std::string rates_csv;
  std::string cdf_csv;
  std::string summary_json;
};

// Quantizer design table for the given resolutions, one row per alpha.
// Columns: alpha,delta_opt,a_tilde,b_tilde,var_bussgang,var_max
std::string build_table1_csv(const std::vector<int>& alphas);

// Long-format per-user rates. Columns:
// detector,alpha,drop,user,rate_bits_per_s_per_Hz
// alpha=0 rows are the unquantized baseline; drop indices are absolute
// (shards keep their global drop numbers).
std::string build_rates_csv(const ExperimentResult& result);

// Pooled empirical CDF per (detector, alpha) variant. Columns:
// detector,alpha,rate,empirical_cdf with cdf = (i+1)/n over sorted rates.
std::string build_cdf_csv(const ExperimentResult& result);

// JSON digest: run_id (FNV-1a over config text + rates csv), seed, the
// config echoed as key=value lines, and per-variant summary stats.
std::string build_summary_json(const ExperimentResult& result,
                               const std::string& rates_csv);

OutputBundle build_outputs(const ExperimentResult& result);

// Creates dir if needed and writes table1.csv, rates.csv, cdf.csv,
// summary.json into it.
void write_outputs(const std::string& dir, const OutputBundle& bundle);

}  // namespace cfsim
