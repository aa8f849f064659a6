#pragma once

#include <map>
#include <string>

#include "epchiral/config.hpp"

namespace epchiral {

// Defaults filled in, every value validated and normalized; the result is
// what the manifest echoes.  Throws ConfigError.
std::map<std::string, std::string> resolve_parameters(const RunConfig& config);

// Runs the configured experiment and writes its files plus manifest.json
// into config.output_dir.  Returns 0 on success, 2 on configuration errors,
// 3 on numerical failures; failures are also recorded in the manifest.
int dispatch(const RunConfig& config);

}  // namespace epchiral
