#include "aerials/trace_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace aerials {

namespace {

ordered_json span_to_json(TimeSpan s) { return ordered_json::array({s.start, s.end}); }

TimeSpan span_from_json(const ordered_json& j) {
  if (!j.is_array() || j.size() != 2) throw TraceError("time span must be [start, end]");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

template <typename F>
auto wrap(F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw TraceError(std::string("trace json: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw TraceError(std::string("trace json: ") + e.what());
  }
}

}  // namespace

ordered_json takeoff_to_json(const TakeoffObservation& obs) {
  return {{"posture", takeoff_posture_name(obs.posture)},
          {"deviation_deg", obs.deviation_deg},
          {"missed", obs.missed},
          {"instrument_hd", obs.instrument_hd}};
}

TakeoffObservation takeoff_from_json(const ordered_json& j) {
  return wrap([&] {
    TakeoffObservation o;
    o.posture = parse_takeoff_posture(j.value("posture", std::string("body_leg")));
    o.deviation_deg = j.value("deviation_deg", 0.0);
    o.missed = j.value("missed", false);
    o.instrument_hd = j.value("instrument_hd", 1.0);
    return o;
  });
}

ordered_json timing_event_to_json(const TwistTimingEvent& ev) {
  return {{"flip", ev.flip_index}, {"kind", timing_kind_name(ev.kind)}, {"degrees", ev.degrees_offset}};
}

TwistTimingEvent timing_event_from_json(const ordered_json& j) {
  return wrap([&] {
    TwistTimingEvent ev;
    ev.flip_index = j.at("flip").get<int>();
    ev.kind = parse_timing_kind(j.at("kind").get<std::string>());
    ev.degrees_offset = j.at("degrees").get<double>();
    return ev;
  });
}

ordered_json form_deviation_to_json(const FormDeviation& dev) {
  return {{"category", form_category_name(dev.category)},
          {"angle_deg", dev.angle_deg},
          {"t", dev.timestamp_s},
          {"in_landing_prep", dev.in_landing_prep},
          {"waist_bend_deg", dev.waist_bend_deg}};
}

FormDeviation form_deviation_from_json(const ordered_json& j, double default_t) {
  return wrap([&] {
    FormDeviation d;
    d.category = parse_form_category(j.at("category").get<std::string>());
    d.angle_deg = j.value("angle_deg", 0.0);
    d.timestamp_s = j.value("t", default_t);
    d.in_landing_prep = j.value("in_landing_prep", false);
    d.waist_bend_deg = j.value("waist_bend_deg", 0.0);
    return d;
  });
}

ordered_json landing_to_json(const LandingObservation& obs) {
  ordered_json flags = ordered_json::array();
  for (auto f : obs.flags) flags.push_back(landing_flag_name(f));
  return {{"contact", landing_contact_name(obs.contact)}, {"flags", flags}};
}

LandingObservation landing_from_json(const ordered_json& j) {
  return wrap([&] {
    LandingObservation o;
    o.contact = parse_landing_contact(j.value("contact", std::string("none")));
    if (j.contains("flags"))
      for (const auto& f : j.at("flags")) o.flags.insert(parse_landing_flag(f.get<std::string>()));
    return o;
  });
}

ordered_json boundaries_to_json(const StageBoundaries& b) {
  return {{"air", span_to_json(b.air())}, {"form", span_to_json(b.form())}, {"landing", span_to_json(b.landing())}};
}

StageBoundaries boundaries_from_json(const ordered_json& j) {
  return wrap([&] {
    const auto air = span_from_json(j.at("air"));
    const auto form = span_from_json(j.at("form"));
    const auto landing = span_from_json(j.at("landing"));
    if (air.end != form.start || form.end != landing.start) throw TraceError("stage boundaries must be contiguous");
    return StageBoundaries{air.start, air.end, form.end, landing.end};
  });
}

ordered_json sub_actions_to_json(const std::vector<TimeSpan>& spans) {
  ordered_json arr = ordered_json::array();
  for (const auto& s : spans) arr.push_back(span_to_json(s));
  return arr;
}

std::vector<TimeSpan> sub_actions_from_json(const ordered_json& j) {
  return wrap([&] {
    std::vector<TimeSpan> out;
    for (const auto& s : j) out.push_back(span_from_json(s));
    return out;
  });
}

ordered_json trace_to_json(const ExecutionTrace& t) {
  ordered_json timing = ordered_json::array();
  for (const auto& ev : t.timing_events) timing.push_back(timing_event_to_json(ev));
  ordered_json form = ordered_json::array();
  for (const auto& d : t.form_deviations) form.push_back(form_deviation_to_json(d));
  return {{"schema", kTraceSchema},
          {"code", t.code_text},
          {"gender", gender_name(t.gender)},
          {"stage_boundaries", boundaries_to_json(t.boundaries)},
          {"sub_actions", sub_actions_to_json(t.sub_actions)},
          {"takeoff", takeoff_to_json(t.takeoff)},
          {"timing_events", timing},
          {"form_deviations", form},
          {"landing", landing_to_json(t.landing)},
          {"separation_shown", t.separation_shown}};
}

ExecutionTrace trace_from_json(const ordered_json& j) {
  return wrap([&] {
    if (j.value("schema", std::string(kTraceSchema)) != kTraceSchema)
      throw TraceError("unsupported trace schema '" + j.at("schema").get<std::string>() + "'");
    ExecutionTrace t;
    t.code_text = j.at("code").get<std::string>();
    t.gender = parse_gender(j.at("gender").get<std::string>());
    t.boundaries = boundaries_from_json(j.at("stage_boundaries"));
    t.sub_actions = sub_actions_from_json(j.at("sub_actions"));
    t.takeoff = takeoff_from_json(j.at("takeoff"));
    if (j.contains("timing_events"))
      for (const auto& ev : j.at("timing_events")) t.timing_events.push_back(timing_event_from_json(ev));
    if (j.contains("form_deviations"))
      for (const auto& d : j.at("form_deviations")) t.form_deviations.push_back(form_deviation_from_json(d));
    t.landing = landing_from_json(j.at("landing"));
    t.separation_shown = j.value("separation_shown", true);
    return t;
  });
}

ordered_json deduction_to_json(const Deduction& d) {
  return {{"stage", stage_name(d.stage)},
          {"item", d.item},
          {"severity", severity_name(d.severity)},
          {"points", format_tenths(d.points)},
          {"t", std::round(d.timestamp_s * 1e4) / 1e4}};  // midpoints can carry binary noise
}

Deduction deduction_from_json(const ordered_json& j) {
  return wrap([&] {
    Deduction d;
    d.stage = parse_stage(j.at("stage").get<std::string>());
    d.item = j.at("item").get<std::string>();
    d.severity = parse_severity(j.at("severity").get<std::string>());
    d.points = Tenths{static_cast<int>(parse_fixed(j.at("points").get<std::string>(), 1))};
    d.timestamp_s = j.at("t").get<double>();
    return d;
  });
}

ordered_json judge_score_to_json(const JudgeScore& s, bool with_deductions) {
  ordered_json j = {{"air", format_tenths(s.air)},
                    {"form", format_tenths(s.form)},
                    {"landing", format_tenths(s.landing)},
                    {"total", format_tenths(s.total)}};
  if (with_deductions) {
    ordered_json ds = ordered_json::array();
    for (const auto& d : s.deductions) ds.push_back(deduction_to_json(d));
    j["deductions"] = ds;
  }
  return j;
}

ordered_json panel_to_json(const PanelResult& p) {
  ordered_json judges = ordered_json::array();
  for (const auto& s : p.judges) judges.push_back(judge_score_to_json(s, false));
  return {{"judges", judges},
          {"kept", p.kept_indices},
          {"stage_scores",
           {{"air", format_tenths(p.stage_subscore(Stage::Air))},
            {"form", format_tenths(p.stage_subscore(Stage::Form))},
            {"landing", format_tenths(p.stage_subscore(Stage::Landing))}}},
          {"pre_dd_mean", p.pre_dd_mean_text()},
          {"dd", format_dd(p.dd)},
          {"final_score", format_hundredths(p.final_score)}};
}

TraceFile parse_trace_file(std::string_view text) {
  return wrap([&] {
    const auto j = ordered_json::parse(text);
    TraceFile f;
    if (j.value("schema", std::string()) == kPanelSchema) {
      f.is_panel = true;
      for (const auto& t : j.at("judges")) f.traces.push_back(trace_from_json(t));
    } else {
      f.traces.push_back(trace_from_json(j));
    }
    return f;
  });
}

TraceFile load_trace_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TraceError("cannot open trace file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_trace_file(ss.str());
}

ordered_json panel_file_to_json(const std::vector<ExecutionTrace>& traces) {
  ordered_json judges = ordered_json::array();
  for (const auto& t : traces) judges.push_back(trace_to_json(t));
  return {{"schema", kPanelSchema}, {"judges", judges}};
}

std::string render_judge_score(const JudgeScore& s) {
  std::ostringstream out;
  out << "air " << format_tenths(s.air) << "\nform " << format_tenths(s.form) << "\nlanding "
      << format_tenths(s.landing) << "\ntotal " << format_tenths(s.total) << "\n";
  out << "deductions " << s.deductions.size() << "\n";
  for (const auto& d : s.deductions) {
    std::ostringstream t;
    t.precision(3);
    t << std::fixed << d.timestamp_s;
    out << "  " << stage_name(d.stage) << "\t" << t.str() << "s\t" << severity_name(d.severity) << "\t-"
        << format_tenths(d.points) << "\t" << d.item << "\n";
  }
  return out.str();
}

std::string render_panel(const PanelResult& p) {
  std::ostringstream out;
  for (std::size_t i = 0; i < p.judges.size(); ++i) {
    const bool kept = std::find(p.kept_indices.begin(), p.kept_indices.end(), i) != p.kept_indices.end();
    out << "judge " << (i + 1) << " total " << format_tenths(p.judges[i].total) << (kept ? "" : " (dropped)") << "\n";
  }
  out << "stage air " << format_tenths(p.stage_subscore(Stage::Air)) << "\nstage form "
      << format_tenths(p.stage_subscore(Stage::Form)) << "\nstage landing "
      << format_tenths(p.stage_subscore(Stage::Landing)) << "\n";
  out << "mean " << p.pre_dd_mean_text() << "\ndd " << format_dd(p.dd) << "\nfinal " << format_hundredths(p.final_score)
      << "\n";
  return out.str();
}

}  // namespace aerials
