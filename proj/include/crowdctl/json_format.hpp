#pragma once

#include <string>

#include <json.hpp>

namespace crowdctl {

/// Writes `doc` with two-space indentation, arrays of scalars on a single
/// line, and every floating-point number with 17 significant digits.
/// Throws std::invalid_argument on a non-finite number.
std::string format_json(const nlohmann::ordered_json& doc);

/// `value`, or the strings "+inf" / "-inf" for infinities (JSON has no
/// infinity literal).
nlohmann::ordered_json json_real(double value);

/// Inverse of json_real.
double real_from_json(const nlohmann::ordered_json& value);

} // namespace crowdctl
