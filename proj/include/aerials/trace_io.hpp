#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "aerials/scoring.hpp"

namespace aerials {

using ordered_json = nlohmann::ordered_json;

inline constexpr std::string_view kTraceSchema = "aerials.trace/1";
inline constexpr std::string_view kPanelSchema = "aerials.panel/1";

// Trace file format. Stage boundaries are written as contiguous
// [start, end] pairs; sub-actions as [start, end] pairs.
ordered_json trace_to_json(const ExecutionTrace& trace);
ExecutionTrace trace_from_json(const ordered_json& j);

ordered_json takeoff_to_json(const TakeoffObservation& obs);
TakeoffObservation takeoff_from_json(const ordered_json& j);
ordered_json timing_event_to_json(const TwistTimingEvent& ev);
TwistTimingEvent timing_event_from_json(const ordered_json& j);
ordered_json form_deviation_to_json(const FormDeviation& dev);
// `default_t` is used when the object carries no "t".
FormDeviation form_deviation_from_json(const ordered_json& j, double default_t = 0.0);
ordered_json landing_to_json(const LandingObservation& obs);
LandingObservation landing_from_json(const ordered_json& j);
ordered_json boundaries_to_json(const StageBoundaries& b);
StageBoundaries boundaries_from_json(const ordered_json& j);
ordered_json sub_actions_to_json(const std::vector<TimeSpan>& spans);
std::vector<TimeSpan> sub_actions_from_json(const ordered_json& j);

ordered_json deduction_to_json(const Deduction& d);
Deduction deduction_from_json(const ordered_json& j);
ordered_json judge_score_to_json(const JudgeScore& s, bool with_deductions = true);
ordered_json panel_to_json(const PanelResult& p);

// Either a single trace object or a panel object {"schema": "aerials.panel/1", "judges": [5 traces]}.
struct TraceFile {
  std::vector<ExecutionTrace> traces;
  bool is_panel = false;
};
TraceFile parse_trace_file(std::string_view text);
TraceFile load_trace_file(const std::filesystem::path& path);
ordered_json panel_file_to_json(const std::vector<ExecutionTrace>& traces);

// Plain-text report used by the CLI.
std::string render_judge_score(const JudgeScore& s);
std::string render_panel(const PanelResult& p);

}  // namespace aerials
