#pragma once

// Builders shared by the unit tests and the acceptance suite.

#include <algorithm>
#include <array>
#include <cstdio>
#include <sys/wait.h>
#include <random>
#include <string>
#include <vector>

#include "aerials/catalog.hpp"
#include "aerials/jumpcode.hpp"
#include "aerials/scoring.hpp"

namespace aerials::testing {

// Clean trace on the 0 / 1.6 / 4.6 / 7.7 s layout with equal sub-actions.
inline ExecutionTrace make_trace(const std::string& code, Gender gender = Gender::Men) {
  ExecutionTrace t;
  t.code_text = code;
  t.gender = gender;
  t.boundaries = {0.0, 1.6, 4.6, 7.7};
  const auto flips = parse_jump_code(code).flip_count();
  const double w = 3.0 / static_cast<double>(flips);
  for (std::size_t i = 0; i < flips; ++i)
    t.sub_actions.push_back({1.6 + w * static_cast<double>(i), i + 1 == flips ? 4.6 : 1.6 + w * (i + 1.0)});
  return t;
}

inline JudgeScore score_with_total(int total_tenths) {
  JudgeScore s;
  s.air = Tenths{std::min(total_tenths, 20)};
  s.landing = Tenths{std::min(std::max(total_tenths - 20, 0), 30)};
  s.form = Tenths{total_tenths - s.air.value - s.landing.value};
  s.total = Tenths{total_tenths};
  return s;
}

// Arbitrary valid trace, including extreme and degenerate observations.
inline ExecutionTrace random_trace(std::mt19937_64& rng, const DifficultyCatalog& catalog) {
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto coin = [&](double p) { return uni(0, 1) < p; };
  const auto& entry = catalog.entries()[rng() % catalog.size()];
  ExecutionTrace t = make_trace(entry.code, coin(0.5) ? Gender::Men : Gender::Women);
  const int flips = static_cast<int>(t.sub_actions.size());

  t.takeoff.posture = static_cast<TakeoffPosture>(rng() % 3);
  t.takeoff.deviation_deg = coin(0.1) ? 180.0 : uni(0, 180);
  t.takeoff.missed = coin(0.1);
  t.takeoff.instrument_hd = coin(0.1) ? 0.0 : uni(0, 1);

  for (int f = 1; f <= flips; ++f) {
    if (coin(0.5)) t.timing_events.push_back({f, TimingKind::EarlyStart, uni(0, 180)});
    if (flips >= 2 && coin(0.5)) t.timing_events.push_back({f, TimingKind::LateFinish, uni(0, 180)});
  }
  const int devs = static_cast<int>(rng() % 12);
  for (int i = 0; i < devs; ++i) {
    FormDeviation d;
    d.category = static_cast<FormCategory>(rng() % kFormCategoryCount);
    d.angle_deg = coin(0.2) ? 180.0 : uni(0, 180);
    d.timestamp_s = uni(1.6, 4.6);
    d.in_landing_prep = coin(0.15);
    d.waist_bend_deg = uni(0, 90);
    t.form_deviations.push_back(d);
  }
  t.separation_shown = !coin(0.2);
  t.landing.contact = static_cast<LandingContact>(rng() % 3);
  for (std::size_t f = 0; f < kLandingFlagCount; ++f)
    if (coin(0.3)) t.landing.flags.insert(static_cast<LandingFlag>(f));
  return t;
}

// Sort-and-drop-ends sum of the middle three totals.
inline std::int64_t brute_force_kept_sum(std::array<int, 5> totals) {
  std::sort(totals.begin(), totals.end());
  return static_cast<std::int64_t>(totals[1]) + totals[2] + totals[3];
}

// (sum / 3) tenths x dd ten-thousandths, rounded half-even to hundredths, via
// long division on the exact rational.
inline std::int64_t brute_force_final(std::int64_t kept_sum, int dd) {
  const std::int64_t num = kept_sum * dd, den = 3000;
  const std::int64_t q = num / den, r = num % den;
  if (2 * r > den) return q + 1;
  if (2 * r < den) return q;
  return q % 2 == 0 ? q : q + 1;
}

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

inline CommandResult run_command(const std::string& cmd) {
  CommandResult r;
  FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace aerials::testing
