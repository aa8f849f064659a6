#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "epchiral/config.hpp"
#include "epchiral/experiments.hpp"
#include "epchiral/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"two-level exceptional-point dynamics for chiral discrimination"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir, format;
  std::uint64_t seed = 0;
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "configuration file");
  auto* out_opt = app.add_option("--out", out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed");
  auto* fmt_opt = app.add_option("--format", format, "table format")
                      ->check(CLI::IsMember({"csv", "json", "both"}));
  app.add_option("--set", sets, "override key=value (repeatable)")
      ->type_size(1);
  app.set_version_flag("--version", epchiral::kVersion);

  const std::pair<const char*, const char*> subs[] = {
      {"ep-locate", "closed-form + refined exceptional points"},
      {"ratio-sweep", "EP positions across width ratios"},
      {"map", "eigenvalue-gap landscape over (delta, omega12)"},
      {"encircle", "one loop around an EP, full time series"},
      {"loop-sweep", "final populations versus loop time"},
      {"average", "isotropic orientation average of the chiral response"},
      {"scaling-probe", "gap-response exponent near a degeneracy"},
  };
  for (const auto& [name, desc] : subs) app.add_subcommand(name, desc)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    epchiral::RunConfig config;
    if (!config_path.empty()) {
      std::ifstream in(config_path, std::ios::binary);
      if (!in)
        throw epchiral::ConfigError("cannot read config file '" + config_path +
                                    "'");
      std::ostringstream ss;
      ss << in.rdbuf();
      config = epchiral::parse_config(ss.str());
      if (epchiral::experiment_name(config.experiment) != sub)
        throw epchiral::ConfigError(
            "config file names experiment '" +
            epchiral::experiment_name(config.experiment) +
            "' but the subcommand is '" + sub + "'");
    } else {
      config.experiment = epchiral::experiment_from_name(sub);
    }
    for (const std::string& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw epchiral::ConfigError("--set expects key=value, got '" + kv +
                                    "'");
      epchiral::apply_override(config, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (out_opt->count()) config.output_dir = out_dir;
    if (seed_opt->count()) config.seed = seed;
    if (fmt_opt->count())
      config.output_format = epchiral::format_from_name(format);

    const int code = epchiral::dispatch(config);
    if (code != 0)
      std::cerr << "epchiral: " << sub << " failed; see manifest.json in '"
                << config.output_dir << "'\n";
    return code;
  } catch (const epchiral::ConfigError& e) {
    std::cerr << "epchiral: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "epchiral: " << e.what() << "\n";
    return 3;
  }
}
