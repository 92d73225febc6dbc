#include "blockwright/common/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace blockwright::text {

namespace {

constexpr std::array<std::string_view, 21> kCardinals = {
    "zero",    "one",     "two",       "three",    "four",    "five",    "six",
    "seven",   "eight",   "nine",      "ten",      "eleven",  "twelve",  "thirteen",
    "fourteen", "fifteen", "sixteen",  "seventeen", "eighteen", "nineteen", "twenty"};

constexpr std::array<std::string_view, 21> kOrdinals = {
    "zeroth",     "first",      "second",      "third",      "fourth",    "fifth",
    "sixth",      "seventh",    "eighth",      "ninth",      "tenth",     "eleventh",
    "twelfth",    "thirteenth", "fourteenth",  "fifteenth",  "sixteenth", "seventeenth",
    "eighteenth", "nineteenth", "twentieth"};

std::optional<int> parse_digits(std::string_view s) {
  if (s.empty() || s.size() > 2) {
    return std::nullopt;
  }
  int value = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      return std::nullopt;
    }
    value = value * 10 + (c - '0');
  }
  return value;
}

} // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) {
      break;
    }
    start = pos + 1;
  }
  return out;
}

std::string join(const std::vector<std::string> &parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) {
      out += sep;
    }
    out += parts[i];
  }
  return out;
}

std::string ordinal(int n) {
  const int mod100 = n % 100;
  const char *suffix = "th";
  if (mod100 < 11 || mod100 > 13) {
    switch (n % 10) {
    case 1: suffix = "st"; break;
    case 2: suffix = "nd"; break;
    case 3: suffix = "rd"; break;
    default: break;
    }
  }
  return std::to_string(n) + suffix;
}

std::optional<int> parse_ordinal(std::string_view token) {
  for (std::size_t i = 1; i < kOrdinals.size(); ++i) {
    if (token == kOrdinals[i]) {
      return static_cast<int>(i);
    }
  }
  if (token.size() >= 3) {
    const auto suffix = token.substr(token.size() - 2);
    if (suffix == "st" || suffix == "nd" || suffix == "rd" || suffix == "th") {
      return parse_digits(token.substr(0, token.size() - 2));
    }
  }
  return std::nullopt;
}

std::optional<int> parse_cardinal(std::string_view token) {
  for (std::size_t i = 0; i < kCardinals.size(); ++i) {
    if (token == kCardinals[i]) {
      return static_cast<int>(i);
    }
  }
  return parse_digits(token);
}

std::string cardinal_word(int n) {
  if (n >= 0 && n < static_cast<int>(kCardinals.size())) {
    return std::string(kCardinals[static_cast<std::size_t>(n)]);
  }
  return std::to_string(n);
}

} // namespace blockwright::text
