#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace blockwright::text {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string> &parts, std::string_view sep);

/// "1st", "2nd", "3rd", "4th", ..., "11th", "12th", "13th", ...
std::string ordinal(int n);

/// Accepts "5th", "5", "fifth", "five" style tokens for 1..99. Digit forms
/// with any two-letter suffix are accepted; word forms cover 1..20.
std::optional<int> parse_ordinal(std::string_view token);
std::optional<int> parse_cardinal(std::string_view token);

std::string cardinal_word(int n);

} // namespace blockwright::text
