#pragma once

#include <map>
#include <string>
#include <vector>

#include "flexsat/experiment.hpp"

namespace flexsat {

struct AnalyzeOptions {
  std::vector<int> Ns{6, 8, 12, 16};
  std::vector<double> transfer_omegas{0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 6.0};
  double resolvent_lo = -200, resolvent_hi = 200;
  int resolvent_n = 401;
  /// Sampling range for the interconnection lower bound; the start omega_0 is a knob.
  double interconnection_lo = 1.0, interconnection_hi = 1e4;
  int interconnection_n = 400;
};

/// Full description of one CLI run.
struct RunConfig {
  ExperimentConfig experiment;
  AnalyzeOptions analyze;
  /// Default grids per sweep parameter, in "lo:hi:n[:log]" form.
  std::map<std::string, std::string> sweep_grids{{"c1", "0.5:10:25:log"},
                                                 {"c2", "0.5:10:25:log"},
                                                 {"q0", "0.1:100:25:log"},
                                                 {"r0", "0.01:1:25:log"}};
  std::string output_dir = "out";
  unsigned workers = 0;
};

/// Parses a JSON document. Missing keys take defaults; unknown keys and
/// invalid values raise ConfigError.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

/// Fully resolved config as pretty-printed JSON; parse_config of the result
/// reproduces the same config.
std::string dump_config(const RunConfig& cfg);

}  // namespace flexsat
