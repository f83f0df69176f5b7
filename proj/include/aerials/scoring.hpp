#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "aerials/catalog.hpp"
#include "aerials/fixed_point.hpp"
#include "aerials/jumpcode.hpp"
#include "aerials/rulebook.hpp"

namespace aerials {

struct TimeSpan {
  double start = 0.0;
  double end = 0.0;

  double midpoint() const { return 0.5 * (start + end); }
  friend bool operator==(const TimeSpan&, const TimeSpan&) = default;
};

// Air [t0,t1), form [t1,t2), landing [t2,t3].
struct StageBoundaries {
  double t0 = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;

  TimeSpan air() const { return {t0, t1}; }
  TimeSpan form() const { return {t1, t2}; }
  TimeSpan landing() const { return {t2, t3}; }
  friend bool operator==(const StageBoundaries&, const StageBoundaries&) = default;
};

struct ExecutionTrace {
  std::string code_text;
  Gender gender = Gender::Men;
  StageBoundaries boundaries;
  std::vector<TimeSpan> sub_actions;  // one per flip, inside the form stage
  TakeoffObservation takeoff;
  std::vector<TwistTimingEvent> timing_events;
  std::vector<FormDeviation> form_deviations;
  LandingObservation landing;
  bool separation_shown = true;

  friend bool operator==(const ExecutionTrace&, const ExecutionTrace&) = default;
};

enum class Stage { Air, Form, Landing };
std::string_view stage_name(Stage s);  // "air" / "form" / "landing"
Stage parse_stage(std::string_view s);

struct Deduction {
  Stage stage = Stage::Air;
  std::string item;
  Severity severity = Severity::Minor;
  Tenths points;
  double timestamp_s = 0.0;

  friend bool operator==(const Deduction&, const Deduction&) = default;
};

struct StageResult {
  Tenths score;
  std::vector<Deduction> deductions;
};

struct JudgeScore {
  Tenths air;
  Tenths form;
  Tenths landing;
  Tenths total;
  std::vector<Deduction> deductions;  // sorted by (timestamp, item)

  friend bool operator==(const JudgeScore&, const JudgeScore&) = default;
};

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PanelSizeError : public std::runtime_error {
 public:
  explicit PanelSizeError(std::size_t n)
      : std::runtime_error("a judging panel needs exactly 5 scores, got " + std::to_string(n)) {}
};

// Structural checks: boundary order, sub-action partition, timestamps, flip
// references. Throws TraceError, JumpCodeError or RuleError.
void validate_trace(const ExecutionTrace& trace);

StageResult score_air(const ExecutionTrace& trace, const RuleConfig& cfg);
StageResult score_form(const ExecutionTrace& trace, const RuleConfig& cfg);
StageResult score_landing(const ExecutionTrace& trace, const RuleConfig& cfg);
JudgeScore score_trace(const ExecutionTrace& trace, const RuleConfig& cfg);

inline constexpr std::size_t kPanelSize = 5;
inline constexpr std::size_t kKeptJudges = 3;

// Whether the high/low trim is decided on judge totals (stage sub-scores then
// come from the same three judges) or independently for each stage.
enum class TrimMode { PerTotal, PerStage };

struct PanelResult {
  std::array<JudgeScore, kPanelSize> judges;
  std::array<std::size_t, kKeptJudges> kept_indices{};
  // Sums over the kept judges in tenths; divide by kKeptJudges for the mean.
  std::array<std::int64_t, 3> stage_sums{};  // air, form, landing
  std::int64_t kept_total_sum = 0;
  DegreeOfDifficulty dd;
  Hundredths final_score;

  // Stage mean rounded half-even to tenths.
  Tenths stage_subscore(Stage s) const;
  // pre_dd_mean rendered with 4 decimals, e.g. "8.3333".
  std::string pre_dd_mean_text() const;
};

// Drop one max-total and one min-total instance (earliest index on ties),
// average the rest, multiply by DD, round half-even to hundredths.
PanelResult aggregate_panel(std::span<const JudgeScore> scores, DegreeOfDifficulty dd,
                            TrimMode mode = TrimMode::PerTotal);

// Indices of the three judges kept after trimming `values`.
std::array<std::size_t, kKeptJudges> trimmed_indices(std::span<const int> values);

struct AnnotatedJump {
  std::string id;
  std::string athlete;
  Gender gender = Gender::Men;
  std::string code;
  DegreeOfDifficulty dd;
  ExecutionTrace trace;
  PanelResult panel;
  std::vector<Deduction> deductions;
};

// Union of the kept judges' deductions, deduplicated on (item, timestamp);
// the first kept judge's entry wins.
std::vector<Deduction> merge_kept_deductions(const PanelResult& panel);

}  // namespace aerials
