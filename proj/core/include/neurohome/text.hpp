#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace neurohome::text {

// Shortest fixed-notation decimal that parses back to exactly `value`.
std::string format_decimal(double value);

// Strict decimal: optional '-' or '+', digits, optional '.' and digits.
// No exponents, no inf/nan. Returns nullopt on anything else.
std::optional<double> parse_decimal(std::string_view token);

}  // namespace neurohome::text
