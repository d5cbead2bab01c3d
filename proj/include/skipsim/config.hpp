#ifndef SKIPSIM_CONFIG_HPP
#define SKIPSIM_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "skipsim/energy.hpp"
#include "skipsim/workload.hpp"

namespace skipsim {

// Environment variable naming the default config file.
inline constexpr const char* kConfigEnvVar = "SKIPSIM_CONFIG";

struct Config {
	ProcessorModel cpu;
	GenConfig gen;
	ColoringMode coloring = ColoringMode::automaton;
	bool bwp_abort_literal = false;
	bool dvs_outcome_guard = true;
	// sweep horizons are capped at this many time units
	std::int64_t hyperperiod_cap = 20000;
};

// JSON document with optional "processor", "generator" and "simulation"
// objects; unknown keys are rejected. Numeric values may be JSON numbers or
// strings such as "1/20".
Config parse_config(std::istream& in, Config base = {});
Config load_config(const std::string& path, Config base = {});
// Loads the file named by SKIPSIM_CONFIG if set, else returns defaults.
Config default_config();

} // namespace skipsim

#endif
