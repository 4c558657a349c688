#include "rhaly/format.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rhaly {

std::string format_double(double value) {
  if (std::isnan(value)) {
    return "nan";
  }
  if (std::isinf(value)) {
    return value > 0 ? "inf" : "-inf";
  }
  std::array<char, 64> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                    std::chars_format::general, 17);
  return std::string(buf.data(), result.ptr);
}

}  // namespace rhaly

namespace rhaly {

nlohmann::json json_real(double value) {
  if (std::isfinite(value)) {
    return value;
  }
  return format_double(value);
}

double real_from_json(const nlohmann::json& value) {
  if (value.is_string()) {
    const auto& text = value.get_ref<const std::string&>();
    if (text == "inf") {
      return std::numeric_limits<double>::infinity();
    }
    if (text == "-inf") {
      return -std::numeric_limits<double>::infinity();
    }
    if (text == "nan") {
      return std::numeric_limits<double>::quiet_NaN();
    }
    throw std::invalid_argument("not a number: " + text);
  }
  return value.get<double>();
}

}  // namespace rhaly
