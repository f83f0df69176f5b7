#include "aerials/fixed_point.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

namespace aerials {

int round_half_away(double x) {
  constexpr double kBias = 1e-9;
  return static_cast<int>(x >= 0 ? std::floor(x + 0.5 + kBias) : -std::floor(-x + 0.5 + kBias));
}

Tenths round_to_tenths(double points) { return Tenths{round_half_away(points * 10.0)}; }

std::int64_t div_round_half_even(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw std::invalid_argument("div_round_half_even: denominator must be positive");
  std::int64_t q = num / den;
  std::int64_t r = num % den;
  if (r < 0) {  // floor division
    q -= 1;
    r += den;
  }
  const std::int64_t twice = 2 * r;
  if (twice > den || (twice == den && (q % 2 != 0))) q += 1;
  return q;
}

std::string format_fixed(std::int64_t value, int digits) {
  std::int64_t scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  const bool negative = value < 0;
  const std::uint64_t mag = negative ? static_cast<std::uint64_t>(-value) : static_cast<std::uint64_t>(value);
  std::string out = negative ? "-" : "";
  out += std::to_string(mag / scale);
  if (digits > 0) {
    std::string frac = std::to_string(mag % scale);
    out += '.';
    out.append(static_cast<std::size_t>(digits) - frac.size(), '0');
    out += frac;
  }
  return out;
}

std::int64_t parse_fixed(std::string_view text, int digits) {
  auto fail = [&] { return std::invalid_argument("malformed fixed-point value '" + std::string(text) + "'"); };
  if (text.empty()) throw fail();
  bool negative = false;
  if (text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  const auto dot = text.find('.');
  std::string_view whole = text.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (whole.empty() || (digits > 0 && frac.size() != static_cast<std::size_t>(digits)) ||
      (digits == 0 && dot != std::string_view::npos))
    throw fail();
  auto digits_only = [](std::string_view s) {
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  if (!digits_only(whole) || !digits_only(frac)) throw fail();
  std::int64_t w = 0, f = 0;
  std::from_chars(whole.data(), whole.data() + whole.size(), w);
  if (!frac.empty()) std::from_chars(frac.data(), frac.data() + frac.size(), f);
  std::int64_t scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  const std::int64_t v = w * scale + f;
  return negative ? -v : v;
}

}  // namespace aerials
