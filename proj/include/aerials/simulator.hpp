#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "aerials/catalog.hpp"
#include "aerials/rulebook.hpp"
#include "aerials/scoring.hpp"

namespace aerials {

struct AthleteProfile {
  std::string id;
  Gender gender = Gender::Men;
  double skill = 0.5;  // [0, 1]; 1 is flawless
  std::vector<std::string> repertoire;
};

// Error magnitudes and probabilities at skill 0. Everything scales with
// (1 - skill), so a skill-1 athlete never errs.
struct ErrorRates {
  double takeoff_sigma_deg = 45.0;
  double takeoff_miss_prob = 0.05;
  double height_distance_sigma = 0.25;
  double early_start_prob = 0.5;
  double early_start_sigma_deg = 40.0;
  double late_finish_prob = 0.5;
  double late_finish_sigma_deg = 60.0;
  double form_break_prob = 0.7;  // per flip
  double form_sigma_deg = 45.0;
  double ski_foot_prob = 0.4;  // per jump
  double ski_foot_sigma_deg = 30.0;
  double landing_prep_prob = 0.3;
  double waist_bend_sigma_deg = 40.0;
  double hand_contact_prob = 0.15;
  double body_contact_prob = 0.10;
  double landing_flag_prob = 0.15;  // per flag
  double separation_miss_prob = 0.1;
};

struct LandingHill {
  double length_m = 30.0;
  double slope_deg = 37.0;
  double slope_tolerance_deg = 1.0;
};

struct SimConfig {
  std::uint64_t seed = 7;
  std::size_t jump_count = 550;
  std::size_t athlete_count = 24;
  double judge_noise_sigma_deg = 3.0;
  double flag_flip_prob = 0.02;
  ErrorRates rates;
  LandingHill hill;  // carried for the record; does not enter scoring
  unsigned threads = 0;  // 0 = hardware concurrency

  void validate() const;
};

// Deterministic stream keyed by (seed, athlete, jump, judge). Variates are
// derived from raw 64-bit engine output so sequences do not depend on the
// standard library's distribution implementations.
class RngStream {
 public:
  static constexpr std::uint64_t kTraceSlot = 0;      // judge slot used for trace sampling
  static constexpr std::uint64_t kProfileJump = ~0ULL;  // jump slot used for profile generation

  RngStream(std::uint64_t seed, std::uint64_t athlete, std::uint64_t jump, std::uint64_t judge);

  std::uint64_t next() { return engine_(); }
  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();   // standard normal
  double half_normal(double sigma) { return sigma > 0 ? std::abs(normal()) * sigma : 0.0; }
  bool bernoulli(double p) { return p > 0 && uniform() < p; }
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t athlete, std::uint64_t jump, std::uint64_t judge);

ExecutionTrace sample_trace(const AthleteProfile& profile, const std::string& code, const ErrorRates& rates,
                            RngStream& rng);

// A judge's view of the trace: angles jittered, boolean flags occasionally
// misread. Code, events and timestamps are unchanged.
ExecutionTrace perceive(const ExecutionTrace& trace, std::size_t judge_index, const SimConfig& cfg, RngStream& rng);

std::vector<AthleteProfile> generate_profiles(const SimConfig& cfg, const DifficultyCatalog& catalog);

std::vector<AnnotatedJump> simulate_competition(const SimConfig& cfg, const std::vector<AthleteProfile>& profiles,
                                                const DifficultyCatalog& catalog, const RuleConfig& rules);

struct SimulationOutput {
  std::string dataset;   // JSONL
  std::string manifest;  // JSON
};

// Full run: profiles, jumps, dataset text and manifest (the manifest names
// `dataset_name` and records digests of the catalog, rules and dataset).
SimulationOutput run_simulation(const SimConfig& cfg, const DifficultyCatalog& catalog, const RuleConfig& rules,
                                const std::string& dataset_name);

std::filesystem::path manifest_path_for(const std::filesystem::path& dataset_path);

}  // namespace aerials
