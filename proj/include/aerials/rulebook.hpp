#pragma once

#include <array>
#include <filesystem>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aerials/fixed_point.hpp"

namespace aerials {

enum class Severity { Minor, Medium, Major, Absolute };

enum class TakeoffPosture { BodyLeg, BodyArch, BodyPike };

struct TakeoffObservation {
  TakeoffPosture posture = TakeoffPosture::BodyLeg;
  double deviation_deg = 0.0;  // [0, 180]
  bool missed = false;
  double instrument_hd = 1.0;  // height/distance instrument reading, [0, 1]

  friend bool operator==(const TakeoffObservation&, const TakeoffObservation&) = default;
};

enum class TimingKind { EarlyStart, LateFinish };

struct TwistTimingEvent {
  int flip_index = 1;  // 1-based
  TimingKind kind = TimingKind::EarlyStart;
  // EarlyStart: degrees before the 180 deg reference.
  // LateFinish: degrees past the 315 deg (double) / 270 deg (triple) reference.
  double degrees_offset = 0.0;

  friend bool operator==(const TwistTimingEvent&, const TwistTimingEvent&) = default;
};

enum class FormCategory { BodyLeg, LayoutToPike, LayoutToOverarch, PikePosition, TuckPosition, Ski, Foot };
inline constexpr std::size_t kFormCategoryCount = 7;

struct FormDeviation {
  FormCategory category = FormCategory::BodyLeg;
  double angle_deg = 0.0;  // [0, 180]
  double timestamp_s = 0.0;
  bool in_landing_prep = false;
  double waist_bend_deg = 0.0;  // only read when in_landing_prep

  friend bool operator==(const FormDeviation&, const FormDeviation&) = default;
};

enum class LandingContact { None, Hand, Body };
enum class LandingFlag { SevereImbalance, Sideways, Circling, Backward };
inline constexpr std::size_t kLandingFlagCount = 4;

struct LandingObservation {
  LandingContact contact = LandingContact::None;
  std::set<LandingFlag> flags;

  friend bool operator==(const LandingObservation&, const LandingObservation&) = default;
};

class RuleError : public std::runtime_error {
 public:
  enum class Kind { OutOfRangeReading, UnsupportedFlipCount, InvalidObservation, InvalidConfig };
  RuleError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct ScaledDeduction {
  Tenths points;
  Severity severity = Severity::Minor;

  friend bool operator==(const ScaledDeduction&, const ScaledDeduction&) = default;
};

// One severity band of a detail deduction scale. Points rise linearly from
// from_points at from_deg to to_points at to_deg; to_deg is inclusive.
struct ScaleBand {
  Severity severity = Severity::Minor;
  double from_deg = 0.0;
  double to_deg = 0.0;
  Tenths from_points;
  Tenths to_points;

  friend bool operator==(const ScaleBand&, const ScaleBand&) = default;
};

// Piecewise-linear deduction table. Angles at or below zero, or below the
// first band, cost nothing; angles past the last band clamp to its top.
struct DeductionScale {
  std::vector<ScaleBand> bands;

  ScaledDeduction evaluate(double angle_deg) const;
  void validate(std::string_view name) const;

  friend bool operator==(const DeductionScale&, const DeductionScale&) = default;
};

namespace detail {
DeductionScale default_early_start();
DeductionScale default_late_finish_double();
DeductionScale default_late_finish_triple();
std::array<DeductionScale, kFormCategoryCount> default_form_scales();
}  // namespace detail

struct RuleConfig {
  int version = 1;

  // Technical take-off: score = intercept - deviation / degrees_per_tenth.
  int takeoff_intercept_tenths = 11;
  double takeoff_degrees_per_tenth = 10.0;

  DeductionScale early_start = detail::default_early_start();
  DeductionScale late_finish_double = detail::default_late_finish_double();
  DeductionScale late_finish_triple = detail::default_late_finish_triple();
  std::array<DeductionScale, kFormCategoryCount> form = detail::default_form_scales();

  Tenths form_max{50};
  Tenths minor_cap{12};
  Tenths medium_cap{25};
  Tenths major_cap{50};

  // Preparation for landing: waist bend above the threshold costs a fixed penalty.
  double landing_prep_threshold_deg = 45.0;
  Tenths landing_prep_penalty{2};

  Tenths separation_missing{0};

  Tenths landing_max{30};
  Tenths hand_contact_cap{20};
  Tenths body_contact_cap{15};
  std::array<Tenths, kLandingFlagCount> landing_flag_penalty{Tenths{5}, Tenths{5}, Tenths{7}, Tenths{10}};

  static RuleConfig defaults();
  void validate() const;

  const DeductionScale& form_scale(FormCategory c) const { return form[static_cast<std::size_t>(c)]; }

  friend bool operator==(const RuleConfig&, const RuleConfig&) = default;
};

enum class TakeoffBand { Good, NonOptimal, Bad };

Tenths takeoff_technical_score(const TakeoffObservation& obs, const RuleConfig& cfg);
Tenths height_distance_score(const TakeoffObservation& obs);
TakeoffBand classify_takeoff(Tenths technical_score);

// Degrees before the 180 deg reference for a movement that started at start_deg.
double degrees_early_from_start(double start_deg);
ScaledDeduction early_start_deduction(double degrees_early, const RuleConfig& cfg);
inline ScaledDeduction early_start_deduction(double degrees_early) {
  return early_start_deduction(degrees_early, RuleConfig::defaults());
}

ScaledDeduction late_finish_deduction(int circles, double degrees_late, const RuleConfig& cfg);
inline ScaledDeduction late_finish_deduction(int circles, double degrees_late) {
  return late_finish_deduction(circles, degrees_late, RuleConfig::defaults());
}

ScaledDeduction form_deviation_deduction(const FormDeviation& dev, const RuleConfig& cfg);

// Total form deduction after per-severity caps and the overall form cap.
Tenths apply_form_break_caps(std::span<const ScaledDeduction> items, const RuleConfig& cfg);

struct LandingAssessment {
  Tenths deduction;  // sum of flag penalties
  Tenths cap;        // best score still available given contact
};
LandingAssessment landing_deductions(const LandingObservation& obs, const RuleConfig& cfg);

void validate_observation(const TakeoffObservation& obs);
void validate_observation(const TwistTimingEvent& ev);
void validate_observation(const FormDeviation& dev);

// Names used in files and logs.
std::string_view severity_name(Severity s);
std::string_view takeoff_posture_name(TakeoffPosture p);
std::string_view timing_kind_name(TimingKind k);
std::string_view form_category_name(FormCategory c);
std::string_view landing_contact_name(LandingContact c);
std::string_view landing_flag_name(LandingFlag f);

Severity parse_severity(std::string_view s);
TakeoffPosture parse_takeoff_posture(std::string_view s);
TimingKind parse_timing_kind(std::string_view s);
FormCategory parse_form_category(std::string_view s);
LandingContact parse_landing_contact(std::string_view s);
LandingFlag parse_landing_flag(std::string_view s);

// Human-readable deduction item labels ("Body Leg Air", "Hand Contact").
std::string_view form_item_label(FormCategory c);
std::string_view landing_flag_label(LandingFlag f);

// Human-editable JSON file (angles in degrees, points in tenths).
std::string rule_config_to_json(const RuleConfig& cfg);
RuleConfig rule_config_from_json(std::string_view text);
RuleConfig load_rule_config(const std::filesystem::path& path);
std::filesystem::path default_rule_config_path();

}  // namespace aerials
