#pragma once

// Configuration-driven experiment runner behind the `chaoswipt` CLI.
//
// Configuration is a flat key-value set merged from a text file and command
// line flags (flags win). Scalar keys accept a single value, a comma list
// ("1,2,4") or an inclusive range ("start:step:stop"); vector keys (omega,
// delays) use commas between elements and ';' between sweep alternatives.
// Every command writes CSV with a fixed header.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chaoswipt {

/// Invalid configuration; the message names the offending key and, for
/// file input, the file and line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { BerAnalytic, BerSim, ZdcAnalytic, ZdcSim, PhiOpt, Region, Gap, ReproduceFigure };

std::string_view to_string(Command command) noexcept;
Command parse_command(std::string_view name);

/// A raw value and where it came from ("run.cfg:3" or "--beta").
struct ConfigValue {
  std::string text;
  std::string origin;
};

using ConfigMap = std::map<std::string, ConfigValue>;

/// Keys understood by the runner, in sweep/echo order.
const std::vector<std::string>& known_keys();

/// Parses "key = value" lines; '#' starts a comment. Throws ConfigError with
/// "<source>:<line>: ..." on malformed lines or unknown keys.
void parse_config_text(std::string_view text, std::string_view source, ConfigMap& into);
void read_config_file(const std::string& path, ConfigMap& into);

/// Environment variable consulted for the default seed.
inline constexpr const char* kSeedEnvVar = "CHAOSWIPT_SEED";
std::uint64_t default_seed();

struct ExperimentSpec {
  Command command = Command::PhiOpt;
  std::string figure;  ///< reproduce-figure only
  ConfigMap values;
  std::uint64_t seed = 1;
  bool timestamp = true;
  int workers = 0;
};

/// Figure presets accepted by reproduce-figure.
const std::vector<std::string>& figure_names();

/// Validates the whole spec, then writes the CSV to `out`. Row-level numeric
/// failures are reported in the status column and the run continues.
/// Throws ConfigError before writing anything if the spec is invalid.
void run(const ExperimentSpec& spec, std::ostream& out);

}  // namespace chaoswipt
