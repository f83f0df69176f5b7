#include "aerials/dataset.hpp"

#include "aerials/trace_io.hpp"

namespace aerials {

namespace {

constexpr std::array<std::string_view, 3> kStageKeys{"air", "form", "landing"};

bool is_fixed(const ordered_json& j, int digits) {
  if (!j.is_string()) return false;
  try {
    parse_fixed(j.get<std::string>(), digits);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

bool is_span(const ordered_json& j) {
  return j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number() && j[0].get<double>() < j[1].get<double>();
}

}  // namespace

DatasetRecord make_record(const AnnotatedJump& jump) {
  DatasetRecord r;
  r.id = jump.id;
  r.gender = jump.gender;
  r.code = jump.code;
  r.dd = jump.dd;
  r.boundaries = jump.trace.boundaries;
  r.sub_actions = jump.trace.sub_actions;
  r.stage_scores = {jump.panel.stage_subscore(Stage::Air), jump.panel.stage_subscore(Stage::Form),
                    jump.panel.stage_subscore(Stage::Landing)};
  r.final_score = jump.panel.final_score;
  r.deductions = jump.deductions;
  return r;
}

std::string serialize_record(const DatasetRecord& rec) {
  ordered_json ds = ordered_json::array();
  for (const auto& d : rec.deductions) ds.push_back(deduction_to_json(d));
  ordered_json j = {{"id", rec.id},
                    {"gender", gender_name(rec.gender)},
                    {"code", rec.code},
                    {"dd", format_dd(rec.dd)},
                    {"stage_boundaries", boundaries_to_json(rec.boundaries)},
                    {"sub_actions", sub_actions_to_json(rec.sub_actions)},
                    {"stage_scores",
                     {{"air", format_tenths(rec.stage_scores[0])},
                      {"form", format_tenths(rec.stage_scores[1])},
                      {"landing", format_tenths(rec.stage_scores[2])}}},
                    {"final_score", format_hundredths(rec.final_score)},
                    {"deductions", ds}};
  return j.dump();
}

std::string emit_annotation(const AnnotatedJump& jump) { return serialize_record(make_record(jump)); }

DatasetRecord parse_record(std::string_view line) {
  try {
    const auto j = ordered_json::parse(line);
    DatasetRecord r;
    r.id = j.at("id").get<std::string>();
    r.gender = parse_gender(j.at("gender").get<std::string>());
    r.code = j.at("code").get<std::string>();
    r.dd = DegreeOfDifficulty{static_cast<int>(parse_fixed(j.at("dd").get<std::string>(), 4))};
    r.boundaries = boundaries_from_json(j.at("stage_boundaries"));
    r.sub_actions = sub_actions_from_json(j.at("sub_actions"));
    for (std::size_t i = 0; i < kStageKeys.size(); ++i)
      r.stage_scores[i] =
          Tenths{static_cast<int>(parse_fixed(j.at("stage_scores").at(std::string(kStageKeys[i])).get<std::string>(), 1))};
    r.final_score = Hundredths{parse_fixed(j.at("final_score").get<std::string>(), 2)};
    for (const auto& d : j.at("deductions")) r.deductions.push_back(deduction_from_json(d));
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw TraceError(std::string("dataset record: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw TraceError(std::string("dataset record: ") + e.what());
  }
}

std::vector<std::string> validate_record(std::string_view line) {
  std::vector<std::string> problems;
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    return {std::string("not JSON: ") + e.what()};
  }
  if (!j.is_object()) return {"record is not an object"};

  static constexpr std::array<std::string_view, 9> kKeys{"id",          "gender",       "code",
                                                         "dd",          "stage_boundaries", "sub_actions",
                                                         "stage_scores", "final_score",  "deductions"};
  if (j.size() != kKeys.size()) problems.push_back("expected exactly " + std::to_string(kKeys.size()) + " fields");
  std::size_t pos = 0;
  for (auto it = j.begin(); it != j.end() && pos < kKeys.size(); ++it, ++pos)
    if (it.key() != kKeys[pos]) problems.push_back("field " + std::to_string(pos) + " should be '" + std::string(kKeys[pos]) + "'");
  for (auto k : kKeys)
    if (!j.contains(std::string(k))) problems.push_back("missing field '" + std::string(k) + "'");
  if (!problems.empty()) return problems;

  if (!j["id"].is_string() || j["id"].get<std::string>().empty()) problems.push_back("id must be a non-empty string");
  if (!j["gender"].is_string() || (j["gender"] != "men" && j["gender"] != "women"))
    problems.push_back("gender must be men or women");
  std::size_t flips = 0;
  try {
    const auto code = j["code"].get<std::string>();
    const auto jump = parse_jump_code(code);
    if (jump.canonical_text != code) problems.push_back("code is not canonical");
    flips = jump.flip_count();
  } catch (const std::exception& e) {
    problems.push_back(std::string("code: ") + e.what());
  }
  if (!is_fixed(j["dd"], 4) || parse_fixed(j["dd"].get<std::string>(), 4) <= 0)
    problems.push_back("dd must be a positive decimal string with 4 fractional digits");

  StageBoundaries b;
  bool have_bounds = false;
  const auto& sb = j["stage_boundaries"];
  if (!sb.is_object() || !sb.contains("air") || !sb.contains("form") || !sb.contains("landing") ||
      !is_span(sb["air"]) || !is_span(sb["form"]) || !is_span(sb["landing"])) {
    problems.push_back("stage_boundaries must hold air/form/landing [start, end] pairs");
  } else if (sb["air"][1] != sb["form"][0] || sb["form"][1] != sb["landing"][0]) {
    problems.push_back("stage boundaries must be contiguous");
  } else {
    b = boundaries_from_json(sb);
    have_bounds = true;
  }

  const auto& sa = j["sub_actions"];
  if (!sa.is_array()) {
    problems.push_back("sub_actions must be an array");
  } else {
    if (flips && sa.size() != flips) problems.push_back("sub_actions count differs from the code's flip count");
    double prev = have_bounds ? b.t1 : -1e300;
    for (const auto& s : sa) {
      if (!is_span(s)) {
        problems.push_back("sub_action must be [start, end]");
        continue;
      }
      if (have_bounds && (s[0].get<double>() < prev || s[1].get<double>() > b.t2))
        problems.push_back("sub_actions must be ordered inside the form stage");
      prev = s[1].get<double>();
    }
  }

  const auto& ss = j["stage_scores"];
  const std::array<int, 3> caps{20, 50, 30};
  for (std::size_t i = 0; i < kStageKeys.size(); ++i) {
    const std::string key(kStageKeys[i]);
    if (!ss.is_object() || !ss.contains(key) || !is_fixed(ss[key], 1)) {
      problems.push_back("stage_scores." + key + " must be a decimal string with 1 fractional digit");
      continue;
    }
    const auto v = parse_fixed(ss[key].get<std::string>(), 1);
    if (v < 0 || v > caps[i]) problems.push_back("stage_scores." + key + " outside its cap");
  }
  if (!is_fixed(j["final_score"], 2) || parse_fixed(j["final_score"].get<std::string>(), 2) < 0)
    problems.push_back("final_score must be a non-negative decimal string with 2 fractional digits");

  const auto& ds = j["deductions"];
  if (!ds.is_array()) {
    problems.push_back("deductions must be an array");
    return problems;
  }
  for (const auto& d : ds) {
    if (!d.is_object() || d.size() != 5 || !d.contains("stage") || !d.contains("item") || !d.contains("severity") ||
        !d.contains("points") || !d.contains("t") || !d["t"].is_number() || !d["item"].is_string() ||
        !is_fixed(d["points"], 1)) {
      problems.push_back("deduction must be {stage, item, severity, points, t}");
      continue;
    }
    try {
      const auto stage = parse_stage(d["stage"].get<std::string>());
      parse_severity(d["severity"].get<std::string>());
      if (parse_fixed(d["points"].get<std::string>(), 1) < 0) problems.push_back("deduction points negative");
      if (have_bounds) {
        const TimeSpan span = stage == Stage::Air ? b.air() : stage == Stage::Form ? b.form() : b.landing();
        const double t = d["t"].get<double>();
        if (t < span.start || t > span.end) problems.push_back("deduction timestamp outside its stage");
      }
    } catch (const std::exception& e) {
      problems.push_back(std::string("deduction: ") + e.what());
    }
  }
  return problems;
}

}  // namespace aerials
