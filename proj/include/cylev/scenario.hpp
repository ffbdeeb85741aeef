#pragma once

#include "cylev/ou.hpp"

#include <json.hpp>

#include <map>

namespace cylev {

using Json = nlohmann::json;

/// Config parse/validation failure carrying a location diagnostic.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n_paths;
  std::optional<std::string> out_dir;
  std::optional<int> threads;
};

struct RunResult {
  Json summary;
  std::vector<std::pair<std::string, Json>> reports;      // report file stem -> body
  std::vector<std::pair<std::string, std::string>> csvs;  // csv file stem -> content
  bool all_passed = true;
};

/// Parse a config document; throws ConfigError with a line/field diagnostic.
Json parse_config_text(const std::string& text);

/// Structural validation: mandatory seed and n_paths, every referenced block
/// id resolvable, known check types.
void validate_config(const Json& config);

/// Canonical serialized form (sorted keys, two-space indent).
std::string canonical_config(const Json& config);

/// Execute every check in the config. Reports are deterministic for a fixed
/// (config, seed) regardless of the thread count.
RunResult run_scenario(const Json& config, const RunOverrides& overrides = {});

struct ScenarioInfo {
  std::string id;
  std::string description;
};

/// Catalog of bundled scenarios (one per verified identity or example).
std::vector<ScenarioInfo> list_scenarios();
bool is_bundled_scenario(const std::string& id);
Json bundled_scenario(const std::string& id);

// Config <-> domain conversions (shared with the bindings).
Vec parse_vec(const Json& j);
Mat parse_mat(const Json& j);
Json vec_to_json(const Vec& v);
Json mat_to_json(const Mat& m);
JumpSizeLaw parse_jump_law(const Json& j);
JumpLawU parse_jump_law_u(const Json& j);
LevyTriplet1D parse_triplet(const Json& j);
ProcessKind parse_process_kind(const Json& j, const Json& config);

}  // namespace cylev
