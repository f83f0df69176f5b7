#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace aerials {

// Points in 0.1 resolution. Every judging scale is expressed in these units.
struct Tenths {
  int value = 0;

  constexpr Tenths() = default;
  constexpr explicit Tenths(int v) : value(v) {}

  constexpr Tenths& operator+=(Tenths o) { value += o.value; return *this; }
  constexpr Tenths& operator-=(Tenths o) { value -= o.value; return *this; }
  friend constexpr Tenths operator+(Tenths a, Tenths b) { return Tenths{a.value + b.value}; }
  friend constexpr Tenths operator-(Tenths a, Tenths b) { return Tenths{a.value - b.value}; }
  friend constexpr auto operator<=>(Tenths, Tenths) = default;
};

// Degree of difficulty in 0.0001 resolution (Table A1 carries at most 4 decimals).
struct DegreeOfDifficulty {
  int value = 0;

  constexpr DegreeOfDifficulty() = default;
  constexpr explicit DegreeOfDifficulty(int v) : value(v) {}
  friend constexpr auto operator<=>(DegreeOfDifficulty, DegreeOfDifficulty) = default;
};

// Final scores, 0.01 resolution.
struct Hundredths {
  std::int64_t value = 0;

  constexpr Hundredths() = default;
  constexpr explicit Hundredths(std::int64_t v) : value(v) {}
  friend constexpr auto operator<=>(Hundredths, Hundredths) = default;
};

constexpr Tenths clamp_tenths(Tenths v, Tenths lo, Tenths hi) {
  return v < lo ? lo : (hi < v ? hi : v);
}

// Nearest integer, ties away from zero. A small bias absorbs binary
// representation error on values that are ties in decimal (0.35 * 10).
int round_half_away(double x);

// Nearest tenth of a point for a value given in points.
Tenths round_to_tenths(double points);

// num / den rounded to nearest, ties to even. den > 0.
std::int64_t div_round_half_even(std::int64_t num, std::int64_t den);

// Fixed-point decimal rendering: value / 10^digits with exactly `digits`
// fractional digits ("1.9", "24.00", "3.1500").
std::string format_fixed(std::int64_t value, int digits);

// Inverse of format_fixed. Requires exactly `digits` fractional digits.
std::int64_t parse_fixed(std::string_view text, int digits);

inline std::string format_tenths(Tenths t) { return format_fixed(t.value, 1); }
inline std::string format_dd(DegreeOfDifficulty dd) { return format_fixed(dd.value, 4); }
inline std::string format_hundredths(Hundredths h) { return format_fixed(h.value, 2); }

}  // namespace aerials
