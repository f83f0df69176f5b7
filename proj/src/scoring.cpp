#include "aerials/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

namespace aerials {

namespace {

void sort_deductions(std::vector<Deduction>& ds) {
  std::stable_sort(ds.begin(), ds.end(), [](const Deduction& a, const Deduction& b) {
    return std::tie(a.timestamp_s, a.item) < std::tie(b.timestamp_s, b.item);
  });
}

Severity takeoff_severity(Tenths technical) {
  switch (classify_takeoff(technical)) {
    case TakeoffBand::Good: return Severity::Minor;
    case TakeoffBand::NonOptimal: return Severity::Medium;
    case TakeoffBand::Bad: break;
  }
  return Severity::Major;
}

Severity flag_severity(Tenths points) {
  if (points.value <= 4) return Severity::Minor;
  if (points.value <= 8) return Severity::Medium;
  return Severity::Major;
}

std::string takeoff_item(TakeoffPosture p) {
  switch (p) {
    case TakeoffPosture::BodyLeg: return "Take-Off Body Leg";
    case TakeoffPosture::BodyArch: return "Take-Off Body Arch";
    case TakeoffPosture::BodyPike: return "Take-Off Body Pike";
  }
  return "Take-Off";
}

bool within(double t, TimeSpan span) { return t >= span.start && t <= span.end; }

}  // namespace

std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::Air: return "air";
    case Stage::Form: return "form";
    case Stage::Landing: return "landing";
  }
  return "?";
}

Stage parse_stage(std::string_view s) {
  if (s == "air") return Stage::Air;
  if (s == "form") return Stage::Form;
  if (s == "landing") return Stage::Landing;
  throw std::invalid_argument("unknown stage '" + std::string(s) + "'");
}

void validate_trace(const ExecutionTrace& trace) {
  const auto jump = parse_jump_code(trace.code_text);
  const auto& b = trace.boundaries;
  if (!(std::isfinite(b.t0) && std::isfinite(b.t3) && b.t0 < b.t1 && b.t1 < b.t2 && b.t2 < b.t3))
    throw TraceError("stage boundaries must satisfy t0 < t1 < t2 < t3");
  if (trace.sub_actions.size() != jump.flip_count())
    throw TraceError("expected " + std::to_string(jump.flip_count()) + " sub-actions for " + jump.canonical_text +
                     ", got " + std::to_string(trace.sub_actions.size()));
  double prev_end = b.t1;
  for (const auto& sa : trace.sub_actions) {
    if (!(sa.start < sa.end) || sa.start < prev_end || sa.end > b.t2)
      throw TraceError("sub-actions must be ordered, non-overlapping and inside the form stage");
    prev_end = sa.end;
  }
  validate_observation(trace.takeoff);
  for (const auto& ev : trace.timing_events) {
    validate_observation(ev);
    if (static_cast<std::size_t>(ev.flip_index) > jump.flip_count())
      throw TraceError("timing event refers to flip " + std::to_string(ev.flip_index) + " of a " +
                       std::to_string(jump.flip_count()) + "-flip jump");
  }
  for (const auto& dev : trace.form_deviations) {
    validate_observation(dev);
    if (!within(dev.timestamp_s, b.form())) throw TraceError("form deviation timestamp outside the form stage");
  }
}

StageResult score_air(const ExecutionTrace& trace, const RuleConfig& cfg) {
  StageResult r;
  const Tenths technical = takeoff_technical_score(trace.takeoff, cfg);
  const Tenths hd = height_distance_score(trace.takeoff);
  r.score = technical + hd;
  const Tenths shortfall = Tenths{10} - technical;
  if (shortfall.value > 0) {
    const double t = trace.boundaries.air().midpoint();
    if (trace.takeoff.missed)
      r.deductions.push_back({Stage::Air, "Missed Take-Off", Severity::Absolute, shortfall, t});
    else
      r.deductions.push_back({Stage::Air, takeoff_item(trace.takeoff.posture), takeoff_severity(technical), shortfall, t});
  }
  return r;
}

StageResult score_form(const ExecutionTrace& trace, const RuleConfig& cfg) {
  const auto jump = parse_jump_code(trace.code_text);
  const int circles = static_cast<int>(jump.flip_count());
  std::vector<ScaledDeduction> items;
  StageResult r;
  auto record = [&](const ScaledDeduction& d, std::string item, double t) {
    items.push_back(d);
    if (d.points.value > 0) r.deductions.push_back({Stage::Form, std::move(item), d.severity, d.points, t});
  };

  for (const auto& ev : trace.timing_events) {
    const auto idx = static_cast<std::size_t>(ev.flip_index - 1);
    const TimeSpan flip = idx < trace.sub_actions.size() ? trace.sub_actions[idx] : trace.boundaries.form();
    if (ev.kind == TimingKind::EarlyStart)
      record(early_start_deduction(ev.degrees_offset, cfg), "Early Twist Start", flip.start);
    else
      record(late_finish_deduction(circles, ev.degrees_offset, cfg), "Late Twist Finish", flip.end);
  }
  for (const auto& dev : trace.form_deviations) {
    record(form_deviation_deduction(dev, cfg),
           dev.in_landing_prep ? std::string("Landing Prep Waist Bend") : std::string(form_item_label(dev.category)),
           dev.timestamp_s);
  }
  if (!trace.separation_shown)
    record({cfg.separation_missing, Severity::Minor}, "Separation", trace.boundaries.form().midpoint());

  const Tenths total = apply_form_break_caps(items, cfg);
  r.score = std::max(Tenths{0}, cfg.form_max - total);
  sort_deductions(r.deductions);
  return r;
}

StageResult score_landing(const ExecutionTrace& trace, const RuleConfig& cfg) {
  StageResult r;
  const auto la = landing_deductions(trace.landing, cfg);
  const Tenths after_flags = std::max(Tenths{0}, cfg.landing_max - la.deduction);
  r.score = std::min(after_flags, la.cap);

  const TimeSpan span = trace.boundaries.landing();
  if (trace.landing.contact != LandingContact::None) {
    const char* item = trace.landing.contact == LandingContact::Hand ? "Hand Contact" : "Body Contact";
    r.deductions.push_back({Stage::Landing, item, Severity::Absolute, after_flags - r.score, span.start});
  }
  for (auto f : trace.landing.flags) {
    const Tenths p = cfg.landing_flag_penalty[static_cast<std::size_t>(f)];
    if (p.value > 0)
      r.deductions.push_back({Stage::Landing, std::string(landing_flag_label(f)), flag_severity(p), p, span.midpoint()});
  }
  sort_deductions(r.deductions);
  return r;
}

JudgeScore score_trace(const ExecutionTrace& trace, const RuleConfig& cfg) {
  validate_trace(trace);
  auto air = score_air(trace, cfg);
  auto form = score_form(trace, cfg);
  auto landing = score_landing(trace, cfg);
  JudgeScore s;
  s.air = air.score;
  s.form = form.score;
  s.landing = landing.score;
  s.total = s.air + s.form + s.landing;
  for (auto* part : {&air, &form, &landing})
    std::move(part->deductions.begin(), part->deductions.end(), std::back_inserter(s.deductions));
  sort_deductions(s.deductions);
  return s;
}

std::array<std::size_t, kKeptJudges> trimmed_indices(std::span<const int> values) {
  if (values.size() != kPanelSize) throw PanelSizeError(values.size());
  std::size_t hi = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[hi]) hi = i;
  std::size_t lo = hi == 0 ? 1 : 0;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (i != hi && values[i] < values[lo]) lo = i;
  std::array<std::size_t, kKeptJudges> kept{};
  std::size_t k = 0;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (i != hi && i != lo) kept[k++] = i;
  return kept;
}

Tenths PanelResult::stage_subscore(Stage s) const {
  return Tenths{static_cast<int>(div_round_half_even(stage_sums[static_cast<std::size_t>(s)], kKeptJudges))};
}

std::string PanelResult::pre_dd_mean_text() const {
  // tenths / 3 -> ten-thousandths
  return format_fixed(div_round_half_even(kept_total_sum * 1000, kKeptJudges), 4);
}

PanelResult aggregate_panel(std::span<const JudgeScore> scores, DegreeOfDifficulty dd, TrimMode mode) {
  if (scores.size() != kPanelSize) throw PanelSizeError(scores.size());
  if (dd.value <= 0) throw std::invalid_argument("degree of difficulty must be positive");
  PanelResult r;
  std::copy(scores.begin(), scores.end(), r.judges.begin());
  r.dd = dd;

  auto column = [&](auto member) {
    std::array<int, kPanelSize> v{};
    for (std::size_t i = 0; i < kPanelSize; ++i) v[i] = (r.judges[i].*member).value;
    return v;
  };
  const auto totals = column(&JudgeScore::total);
  r.kept_indices = trimmed_indices(totals);

  const std::array<Tenths JudgeScore::*, 3> stages{&JudgeScore::air, &JudgeScore::form, &JudgeScore::landing};
  for (std::size_t s = 0; s < stages.size(); ++s) {
    const auto values = column(stages[s]);
    const auto kept = mode == TrimMode::PerTotal ? r.kept_indices : trimmed_indices(values);
    for (auto i : kept) r.stage_sums[s] += values[i];
  }
  if (mode == TrimMode::PerTotal) {
    for (auto i : r.kept_indices) r.kept_total_sum += totals[i];
  } else {
    r.kept_total_sum = r.stage_sums[0] + r.stage_sums[1] + r.stage_sums[2];
  }
  // (sum / 3) tenths x dd ten-thousandths -> hundredths: sum * dd / (3 * 10 * 10000 / 100)
  r.final_score = Hundredths{div_round_half_even(r.kept_total_sum * dd.value, kKeptJudges * 1000)};
  return r;
}

std::vector<Deduction> merge_kept_deductions(const PanelResult& panel) {
  std::vector<Deduction> out;
  std::set<std::pair<std::string, double>> seen;
  for (auto i : panel.kept_indices)
    for (const auto& d : panel.judges[i].deductions)
      if (seen.emplace(d.item, d.timestamp_s).second) out.push_back(d);
  sort_deductions(out);
  return out;
}

}  // namespace aerials
