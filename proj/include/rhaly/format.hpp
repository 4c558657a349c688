#pragma once

#include <string>

#include <json.hpp>

namespace rhaly {

/// Locale-free rendering with 17 significant digits,
/// which round-trips every double. Non-finite values render as "inf", "-inf"
/// and "nan".
std::string format_double(double value);

/// JSON has no infinities; non-finite values become the strings above.
nlohmann::json json_real(double value);

/// Inverse of json_real.
double real_from_json(const nlohmann::json& value);

}  // namespace rhaly
