#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reach/errors.hpp"
#include "reach/systems.hpp"

namespace reach {

/// Malformed or inconsistent experiment configuration.
class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

enum class Algorithm { uniform, adaptive, compare };

std::string_view to_string(Algorithm algorithm);

/// One experiment. Text form, one `key = value` per line, `#` starts a comment:
///
///   system    = exponential | michaelis-menten
///   d         = 1              (exponential only)
///   L         = 1.0            (exponential only)
///   algorithm = uniform | adaptive | compare
///   eps       = 0.25           (target tolerance)
///   ladder    = 2, 1, 0.5      (optional; strictly decreasing, ends at eps)
///   d_R, d_F  = integers       (optional effective-dimension overrides)
///   cap       = 50000000
///   workers   = 1
///   out       = out
///   seed      = 1
///   stride    = 1              (thinning of written set snapshots)
///
/// The same keys are accepted as a JSON object.
struct ExperimentConfig {
  std::string system = "exponential";
  std::size_t d = 1;
  double L = 1.0;
  Algorithm algorithm = Algorithm::adaptive;
  double eps = 0.25;
  std::vector<double> ladder;
  std::optional<int> d_R;
  std::optional<int> d_F;
  std::uint64_t cap = 50'000'000;
  unsigned workers = 1;
  std::string out = "out";
  std::uint64_t seed = 1;
  std::size_t stride = 1;
};

/// Applies one key; unknown keys and unparsable values throw ConfigError.
void set_config_value(ExperimentConfig& config, std::string_view key, std::string_view value);

ExperimentConfig parse_config_text(std::string_view text, ExperimentConfig base = {});
ExperimentConfig parse_config_json(std::string_view text, ExperimentConfig base = {});

/// Throws ConfigError unless eps > 0, the ladder is positive and strictly
/// decreasing, the cap is at least 1e3 and the system parameters are usable.
void validate(const ExperimentConfig& config);

/// Stable text form of every field that influences results (out excluded).
std::string canonical_form(const ExperimentConfig& config);

/// 16 hex digits of the FNV-1a hash of canonical_form.
std::string config_hash(const ExperimentConfig& config);

SystemSpec build_system(const ExperimentConfig& config);

/// The explicit ladder, or the default halving ladder down to eps.
std::vector<double> resolve_ladder(const ExperimentConfig& config, const SystemSpec& system);

}  // namespace reach
