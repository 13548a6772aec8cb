#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "crowdctl/model.hpp"

namespace crowdctl {

inline constexpr int kScenarioVersion = 1;

/// Parses a version-1 scenario document. Kernel rows must be nonnegative and
/// sum to 1 within 1e-9; absolute continuity is left to validate_scenario.
/// With `"stationary": true` every kernel sequence is a single matrix and
/// every reward a single vector, repeated for all stages.
/// Throws ParseError or SchemaVersionError.
Scenario parse_scenario(std::string_view text);

/// Normalized document: expanded stages, 17 significant digits per number.
std::string serialize_scenario(const Scenario& s);

/// Throws IoError if the file cannot be read, plus everything parse_scenario throws.
Scenario load_scenario(const std::filesystem::path& path);

void save_scenario(const Scenario& s, const std::filesystem::path& path);

/// Hex SHA-256 of serialize_scenario(s).
std::string scenario_digest(const Scenario& s);

} // namespace crowdctl
