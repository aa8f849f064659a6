#include "epchiral/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>
#include <vector>

namespace epchiral {

namespace {

struct ExperimentSpec {
  const char* name;
  std::vector<const char*> keys;      // accepted, reserved keys aside
  std::vector<const char*> required;  // checked after flag merging
};

// Indexed by the Experiment enum.
const std::vector<ExperimentSpec>& registry() {
  static const std::vector<ExperimentSpec> r = {
      {"ep-locate", {"gamma1", "gamma2", "ratio", "tolerance"}, {"gamma1"}},
      {"ratio-sweep", {"gamma1", "ratios"}, {"gamma1", "ratios"}},
      {"map",
       {"gamma1", "gamma2", "delta_min", "delta_max", "omega_min", "omega_max",
        "delta_count", "omega_count"},
       {"gamma1", "gamma2", "delta_min", "delta_max", "omega_min",
        "omega_max"}},
      {"encircle",
       {"gamma1", "gamma2", "enantiomer", "direction", "loop_time", "samples",
        "rel_tol", "abs_tol", "initial", "center_delta", "center_omega",
        "radius", "min_track_samples"},
       {"gamma1", "gamma2"}},
      {"loop-sweep",
       {"gamma1", "gamma2", "loop_times", "initial", "center_delta",
        "center_omega", "radius"},
       {"gamma1", "gamma2", "loop_times"}},
      {"average",
       {"mode", "samples", "draws", "shards", "d1e", "d2e", "d12", "f1", "f2",
        "f3", "e1", "e2", "omega2", "omega3"},
       {}},
      {"scaling-probe",
       {"gamma1", "gamma2", "control", "direction_delta", "direction_omega",
        "eps_min_scale", "eps_max_scale", "eps_count"},
       {}},
  };
  return r;
}

const ExperimentSpec& spec_of(Experiment e) {
  return registry()[static_cast<std::size_t>(e)];
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::uint64_t parse_seed(const std::string& value) {
  std::uint64_t out = 0;
  const char* first = value.data();
  const char* last = first + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last)
    throw ConfigError("seed must be a non-negative integer, got '" + value +
                      "'");
  return out;
}

}  // namespace

Experiment experiment_from_name(const std::string& name) {
  const auto& r = registry();
  for (std::size_t i = 0; i < r.size(); ++i)
    if (name == r[i].name) return static_cast<Experiment>(i);
  throw ConfigError("unknown experiment '" + name + "'");
}

std::string experiment_name(Experiment e) { return spec_of(e).name; }

OutputFormat format_from_name(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  if (name == "both") return OutputFormat::Both;
  throw ConfigError("unknown format '" + name + "' (csv, json, both)");
}

std::string format_name(OutputFormat f) {
  switch (f) {
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Json: return "json";
    case OutputFormat::Both: return "both";
  }
  return "csv";
}

void validate_key(Experiment e, const std::string& key) {
  const ExperimentSpec& spec = spec_of(e);
  if (std::find_if(spec.keys.begin(), spec.keys.end(), [&](const char* k) {
        return key == k;
      }) == spec.keys.end())
    throw ConfigError("unknown key '" + key + "' for experiment '" +
                      spec.name + "'");
}

void apply_override(RunConfig& config, const std::string& key,
                    const std::string& value) {
  if (key == "seed") {
    config.seed = parse_seed(value);
  } else if (key == "out") {
    config.output_dir = value;
  } else if (key == "format") {
    config.output_format = format_from_name(value);
  } else {
    validate_key(config.experiment, key);
    config.parameters[key] = value;
  }
}

RunConfig parse_config(const std::string& text) {
  RunConfig config;
  bool have_header = false;
  std::map<std::string, int> first_seen;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (const auto pos = line.find('#'); pos != std::string::npos)
      line.resize(pos);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) +
                          ": malformed [experiment] header");
      if (have_header)
        throw ConfigError("line " + std::to_string(lineno) +
                          ": duplicate experiment header");
      config.experiment =
          experiment_from_name(trim(line.substr(1, line.size() - 2)));
      have_header = true;
      continue;
    }
    if (!have_header)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected [experiment] header before keys");

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (value.empty())
      throw ConfigError("line " + std::to_string(lineno) +
                        ": empty value for '" + key + "'");
    if (const auto it = first_seen.find(key); it != first_seen.end())
      throw ConfigError("duplicate key '" + key + "' (lines " +
                        std::to_string(it->second) + " and " +
                        std::to_string(lineno) + ")");
    first_seen[key] = lineno;
    try {
      apply_override(config, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!have_header)
    throw ConfigError("config: missing [experiment] header");
  return config;
}

std::string serialize_config(const RunConfig& config) {
  std::string out = "[" + experiment_name(config.experiment) + "]\n";
  for (const auto& [k, v] : config.parameters) out += k + " = " + v + "\n";
  out += "format = " + format_name(config.output_format) + "\n";
  out += "out = " + config.output_dir + "\n";
  out += "seed = " + std::to_string(config.seed) + "\n";
  return out;
}

void validate_required(const RunConfig& config) {
  const ExperimentSpec& spec = spec_of(config.experiment);
  for (const char* k : spec.required)
    if (!config.parameters.count(k))
      throw ConfigError(std::string(spec.name) + ": missing required key '" +
                        k + "'");
  if (config.experiment == Experiment::EpLocate) {
    const bool has_g2 = config.parameters.count("gamma2") != 0;
    const bool has_ratio = config.parameters.count("ratio") != 0;
    if (has_g2 && has_ratio)
      throw ConfigError("ep-locate: gamma2 and ratio are mutually exclusive");
    if (!has_g2 && !has_ratio)
      throw ConfigError("ep-locate: needs gamma2 or ratio");
  }
}

}  // namespace epchiral
