#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "epchiral/errors.hpp"

namespace epchiral {

enum class Experiment {
  EpLocate,
  RatioSweep,
  EigengapMap,
  Encircle,
  LoopSweep,
  Average,
  ScalingProbe,
};

// Subcommand-style names: ep-locate, ratio-sweep, map, encircle, loop-sweep,
// average, scaling-probe.  Throws ConfigError on anything else.
Experiment experiment_from_name(const std::string& name);
std::string experiment_name(Experiment e);

enum class OutputFormat { Csv, Json, Both };

OutputFormat format_from_name(const std::string& name);
std::string format_name(OutputFormat f);

struct RunConfig {
  Experiment experiment = Experiment::EpLocate;
  std::map<std::string, std::string> parameters;
  std::uint64_t seed = 0;
  std::string output_dir = ".";
  OutputFormat output_format = OutputFormat::Csv;

  bool operator==(const RunConfig&) const = default;
};

// Line-oriented document: one "[experiment]" header naming the subcommand,
// then "key = value" lines; '#' starts a comment.  Reserved keys seed, out,
// format feed the corresponding RunConfig fields.  Duplicate, unknown, and
// missing required keys are errors (with line numbers where they apply).
RunConfig parse_config(const std::string& text);

std::string serialize_config(const RunConfig& config);

// The per-experiment key registry behind parse_config, exposed so flag
// overrides revalidate the same way: throws ConfigError when key is neither
// reserved nor known for the experiment.
void validate_key(Experiment e, const std::string& key);

// Apply one key=value pair on top of a parsed config (validates the key,
// routes reserved keys to their fields, checks value syntax).
void apply_override(RunConfig& config, const std::string& key,
                    const std::string& value);

// Post-merge check that all required keys are present.
void validate_required(const RunConfig& config);

}  // namespace epchiral
