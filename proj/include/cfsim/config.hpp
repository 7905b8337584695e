#pragma once

#include <string>
#include <vector>

#include "cfsim/simulator.hpp"

namespace cfsim {

// Strict key=value configuration: one pair per line, '#' starts a comment,
// unknown or duplicate keys are rejected by name. Overrides have the same
// key=value syntax and take precedence over file values.
SimConfig parse_config_text(const std::string& text,
                            const std::vector<std::string>& overrides = {});
SimConfig load_config(const std::string& path,
                      const std::vector<std::string>& overrides = {});

// Complete echo of a config in the same format; loading it back reproduces
// the config exactly (doubles use shortest exact decimals).
std::string config_to_text(const SimConfig& config);

std::string format_double(double v);

}  // namespace cfsim
