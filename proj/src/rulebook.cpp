#include "aerials/rulebook.hpp"

#include <algorithm>
#include <cmath>

namespace aerials {

namespace {

ScaleBand band(Severity s, double from, double to, int from_pts, int to_pts) {
  return ScaleBand{s, from, to, Tenths{from_pts}, Tenths{to_pts}};
}

// Standard three-band form table; the minor band starts at minor_from.
DeductionScale form_table(double minor_from, double minor_to, double medium_to, std::array<int, 6> pts) {
  return DeductionScale{{
      band(Severity::Minor, minor_from, minor_to, pts[0], pts[1]),
      band(Severity::Medium, minor_to, medium_to, pts[2], pts[3]),
      band(Severity::Major, medium_to, 180.0, pts[4], pts[5]),
  }};
}

bool finite_in(double v, double lo, double hi) { return std::isfinite(v) && v >= lo && v <= hi; }

}  // namespace

namespace detail {

DeductionScale default_early_start() {
  return DeductionScale{{
      band(Severity::Minor, 0, 45, 0, 5),
      band(Severity::Medium, 45, 90, 5, 10),
  }};
}

DeductionScale default_late_finish_double() {
  return DeductionScale{{
      band(Severity::Minor, 0, 45, 0, 5),
      band(Severity::Medium, 45, 90, 5, 10),
      band(Severity::Major, 90, 135, 10, 15),
  }};
}

DeductionScale default_late_finish_triple() {
  return DeductionScale{{
      band(Severity::Minor, 0, 90, 0, 5),
      band(Severity::Medium, 90, 135, 5, 10),
      band(Severity::Major, 135, 180, 10, 15),
  }};
}

std::array<DeductionScale, kFormCategoryCount> default_form_scales() {
  return {
      form_table(10, 50, 90, {1, 4, 5, 8, 9, 17}),  // BodyLeg
      form_table(0, 20, 90, {1, 4, 5, 8, 9, 17}),   // LayoutToPike
      form_table(0, 20, 40, {1, 4, 5, 8, 9, 17}),   // LayoutToOverarch
      form_table(10, 30, 45, {1, 4, 5, 8, 9, 17}),  // PikePosition
      form_table(10, 30, 45, {1, 4, 5, 8, 9, 17}),  // TuckPosition
      form_table(0, 20, 45, {1, 3, 4, 6, 7, 9}),    // Ski
      form_table(0, 20, 45, {1, 3, 4, 6, 7, 12}),   // Foot
  };
}

}  // namespace detail

ScaledDeduction DeductionScale::evaluate(double angle_deg) const {
  if (bands.empty() || !(angle_deg > 0.0) || angle_deg < bands.front().from_deg)
    return {Tenths{0}, Severity::Minor};
  for (const auto& b : bands) {
    if (angle_deg <= b.to_deg) {
      const double span = b.to_deg - b.from_deg;
      const double frac = span > 0 ? (angle_deg - b.from_deg) / span : 1.0;
      const double pts = b.from_points.value + (b.to_points.value - b.from_points.value) * std::clamp(frac, 0.0, 1.0);
      return {Tenths{round_half_away(pts)}, b.severity};
    }
  }
  return {bands.back().to_points, bands.back().severity};
}

void DeductionScale::validate(std::string_view name) const {
  auto fail = [&](const std::string& why) {
    return RuleError(RuleError::Kind::InvalidConfig, "scale " + std::string(name) + ": " + why);
  };
  if (bands.empty()) throw fail("no bands");
  for (std::size_t i = 0; i < bands.size(); ++i) {
    const auto& b = bands[i];
    if (!(b.from_deg >= 0 && b.to_deg >= b.from_deg && b.to_deg <= 360)) throw fail("band angles out of order");
    if (b.from_points.value < 0 || b.to_points < b.from_points) throw fail("band points decrease");
    if (i > 0) {
      const auto& prev = bands[i - 1];
      if (b.from_deg != prev.to_deg) throw fail("bands are not contiguous");
      if (b.from_points < prev.to_points) throw fail("points decrease across bands");
      if (b.severity <= prev.severity) throw fail("severity must increase across bands");
    }
  }
}

RuleConfig RuleConfig::defaults() { return RuleConfig{}; }

void RuleConfig::validate() const {
  auto fail = [](const std::string& why) { return RuleError(RuleError::Kind::InvalidConfig, why); };
  if (takeoff_degrees_per_tenth <= 0) throw fail("takeoff degrees_per_tenth must be positive");
  early_start.validate("early_start");
  late_finish_double.validate("late_finish_double");
  late_finish_triple.validate("late_finish_triple");
  for (std::size_t i = 0; i < form.size(); ++i) form[i].validate(form_category_name(static_cast<FormCategory>(i)));
  if (!(Tenths{0} <= minor_cap && minor_cap <= medium_cap && medium_cap <= major_cap && major_cap == form_max))
    throw fail("form-break caps must satisfy minor <= medium <= major = form max");
  if (landing_prep_penalty.value < 0 || separation_missing.value < 0) throw fail("penalties must be non-negative");
  if (!(Tenths{0} <= body_contact_cap && body_contact_cap <= hand_contact_cap && hand_contact_cap <= landing_max))
    throw fail("landing caps must satisfy 0 <= body <= hand <= landing max");
  for (auto p : landing_flag_penalty)
    if (p.value < 0) throw fail("landing flag penalties must be non-negative");
}

Tenths takeoff_technical_score(const TakeoffObservation& obs, const RuleConfig& cfg) {
  if (obs.missed) return Tenths{0};
  const double raw = cfg.takeoff_intercept_tenths - obs.deviation_deg / cfg.takeoff_degrees_per_tenth;
  return clamp_tenths(Tenths{round_half_away(raw)}, Tenths{0}, Tenths{10});
}

Tenths height_distance_score(const TakeoffObservation& obs) {
  if (!finite_in(obs.instrument_hd, 0.0, 1.0))
    throw RuleError(RuleError::Kind::OutOfRangeReading,
                    "height/distance instrument reading " + std::to_string(obs.instrument_hd) + " outside [0, 1]");
  return Tenths{round_half_away(obs.instrument_hd * 10.0)};
}

TakeoffBand classify_takeoff(Tenths technical_score) {
  if (technical_score.value >= 7) return TakeoffBand::Good;
  if (technical_score.value >= 4) return TakeoffBand::NonOptimal;
  return TakeoffBand::Bad;
}

double degrees_early_from_start(double start_deg) { return std::max(0.0, 180.0 - start_deg); }

ScaledDeduction early_start_deduction(double degrees_early, const RuleConfig& cfg) {
  return cfg.early_start.evaluate(degrees_early);
}

ScaledDeduction late_finish_deduction(int circles, double degrees_late, const RuleConfig& cfg) {
  switch (circles) {
    case 2: return cfg.late_finish_double.evaluate(degrees_late);
    case 3: return cfg.late_finish_triple.evaluate(degrees_late);
    default:
      throw RuleError(RuleError::Kind::UnsupportedFlipCount,
                      "late twist finish is only judged for double and triple somersaults, got " +
                          std::to_string(circles) + " circle(s)");
  }
}

ScaledDeduction form_deviation_deduction(const FormDeviation& dev, const RuleConfig& cfg) {
  if (dev.in_landing_prep) {
    if (dev.waist_bend_deg > cfg.landing_prep_threshold_deg) return {cfg.landing_prep_penalty, Severity::Minor};
    return {Tenths{0}, Severity::Minor};
  }
  return cfg.form_scale(dev.category).evaluate(dev.angle_deg);
}

Tenths apply_form_break_caps(std::span<const ScaledDeduction> items, const RuleConfig& cfg) {
  Tenths minor, medium, major;
  for (const auto& it : items) {
    switch (it.severity) {
      case Severity::Minor: minor += it.points; break;
      case Severity::Medium: medium += it.points; break;
      case Severity::Major:
      case Severity::Absolute: major += it.points; break;
    }
  }
  const Tenths total = std::min(minor, cfg.minor_cap) + std::min(medium, cfg.medium_cap) + std::min(major, cfg.major_cap);
  return std::min(total, cfg.form_max);
}

LandingAssessment landing_deductions(const LandingObservation& obs, const RuleConfig& cfg) {
  LandingAssessment out;
  for (auto f : obs.flags) out.deduction += cfg.landing_flag_penalty[static_cast<std::size_t>(f)];
  switch (obs.contact) {
    case LandingContact::None: out.cap = cfg.landing_max; break;
    case LandingContact::Hand: out.cap = cfg.hand_contact_cap; break;
    case LandingContact::Body: out.cap = cfg.body_contact_cap; break;
  }
  return out;
}

void validate_observation(const TakeoffObservation& obs) {
  if (!finite_in(obs.deviation_deg, 0.0, 180.0))
    throw RuleError(RuleError::Kind::InvalidObservation, "take-off deviation must be within [0, 180] degrees");
  if (!finite_in(obs.instrument_hd, 0.0, 1.0))
    throw RuleError(RuleError::Kind::OutOfRangeReading, "height/distance instrument reading outside [0, 1]");
}

void validate_observation(const TwistTimingEvent& ev) {
  if (ev.flip_index < 1) throw RuleError(RuleError::Kind::InvalidObservation, "timing event flip index must be >= 1");
  if (!finite_in(ev.degrees_offset, 0.0, 360.0))
    throw RuleError(RuleError::Kind::InvalidObservation, "timing offset must be within [0, 360] degrees");
}

void validate_observation(const FormDeviation& dev) {
  if (!finite_in(dev.angle_deg, 0.0, 180.0))
    throw RuleError(RuleError::Kind::InvalidObservation, "form deviation angle must be within [0, 180] degrees");
  if (!std::isfinite(dev.timestamp_s))
    throw RuleError(RuleError::Kind::InvalidObservation, "form deviation timestamp must be finite");
  if (dev.in_landing_prep && !finite_in(dev.waist_bend_deg, 0.0, 180.0))
    throw RuleError(RuleError::Kind::InvalidObservation, "waist bend must be within [0, 180] degrees");
}

}  // namespace aerials
