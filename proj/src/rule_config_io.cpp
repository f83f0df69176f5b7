#include <fstream>
#include <sstream>

#include <json.hpp>

#include "aerials/rulebook.hpp"

namespace aerials {

namespace {

using ojson = nlohmann::ordered_json;

template <typename E, std::size_t N>
E parse_enum(std::string_view s, const std::array<std::string_view, N>& names, std::string_view what) {
  for (std::size_t i = 0; i < N; ++i)
    if (names[i] == s) return static_cast<E>(i);
  throw std::invalid_argument("unknown " + std::string(what) + " '" + std::string(s) + "'");
}

constexpr std::array<std::string_view, 4> kSeverityNames{"minor", "medium", "major", "absolute"};
constexpr std::array<std::string_view, 3> kPostureNames{"body_leg", "body_arch", "body_pike"};
constexpr std::array<std::string_view, 2> kTimingNames{"early_start", "late_finish"};
constexpr std::array<std::string_view, kFormCategoryCount> kFormNames{
    "body_leg", "layout_to_pike", "layout_to_overarch", "pike_position", "tuck_position", "ski", "foot"};
constexpr std::array<std::string_view, kFormCategoryCount> kFormLabels{
    "Body Leg Air",      "Layout Pike Air",   "Layout Overarch Air", "Pike Position Air",
    "Tuck Position Air", "Ski Alignment Air", "Foot Placement Air"};
constexpr std::array<std::string_view, 3> kContactNames{"none", "hand", "body"};
constexpr std::array<std::string_view, kLandingFlagCount> kFlagNames{"severe_imbalance", "sideways", "circling",
                                                                     "backward"};
constexpr std::array<std::string_view, kLandingFlagCount> kFlagLabels{"Severe Imbalance", "Skiing Sideways",
                                                                      "Circling", "Skiing Backward"};

ojson scale_to_json(const DeductionScale& s) {
  ojson arr = ojson::array();
  for (const auto& b : s.bands) {
    arr.push_back(ojson{{"severity", severity_name(b.severity)},
                        {"from_deg", b.from_deg},
                        {"to_deg", b.to_deg},
                        {"from_tenths", b.from_points.value},
                        {"to_tenths", b.to_points.value}});
  }
  return arr;
}

DeductionScale scale_from_json(const ojson& j) {
  DeductionScale s;
  for (const auto& b : j) {
    s.bands.push_back(ScaleBand{parse_severity(b.at("severity").get<std::string>()), b.at("from_deg").get<double>(),
                                b.at("to_deg").get<double>(), Tenths{b.at("from_tenths").get<int>()},
                                Tenths{b.at("to_tenths").get<int>()}});
  }
  return s;
}

}  // namespace

std::string_view severity_name(Severity s) { return kSeverityNames[static_cast<std::size_t>(s)]; }
std::string_view takeoff_posture_name(TakeoffPosture p) { return kPostureNames[static_cast<std::size_t>(p)]; }
std::string_view timing_kind_name(TimingKind k) { return kTimingNames[static_cast<std::size_t>(k)]; }
std::string_view form_category_name(FormCategory c) { return kFormNames[static_cast<std::size_t>(c)]; }
std::string_view landing_contact_name(LandingContact c) { return kContactNames[static_cast<std::size_t>(c)]; }
std::string_view landing_flag_name(LandingFlag f) { return kFlagNames[static_cast<std::size_t>(f)]; }
std::string_view form_item_label(FormCategory c) { return kFormLabels[static_cast<std::size_t>(c)]; }
std::string_view landing_flag_label(LandingFlag f) { return kFlagLabels[static_cast<std::size_t>(f)]; }

Severity parse_severity(std::string_view s) { return parse_enum<Severity>(s, kSeverityNames, "severity"); }
TakeoffPosture parse_takeoff_posture(std::string_view s) {
  return parse_enum<TakeoffPosture>(s, kPostureNames, "take-off posture");
}
TimingKind parse_timing_kind(std::string_view s) { return parse_enum<TimingKind>(s, kTimingNames, "timing kind"); }
FormCategory parse_form_category(std::string_view s) {
  return parse_enum<FormCategory>(s, kFormNames, "form category");
}
LandingContact parse_landing_contact(std::string_view s) {
  return parse_enum<LandingContact>(s, kContactNames, "landing contact");
}
LandingFlag parse_landing_flag(std::string_view s) { return parse_enum<LandingFlag>(s, kFlagNames, "landing flag"); }

std::string rule_config_to_json(const RuleConfig& cfg) {
  ojson j;
  j["version"] = cfg.version;
  j["takeoff"] = {{"intercept_tenths", cfg.takeoff_intercept_tenths},
                  {"degrees_per_tenth", cfg.takeoff_degrees_per_tenth}};
  j["timing"] = {{"early_start", scale_to_json(cfg.early_start)},
                 {"late_finish_double", scale_to_json(cfg.late_finish_double)},
                 {"late_finish_triple", scale_to_json(cfg.late_finish_triple)}};
  ojson form;
  for (std::size_t i = 0; i < kFormCategoryCount; ++i) form[std::string(kFormNames[i])] = scale_to_json(cfg.form[i]);
  j["form"] = form;
  j["form_break_caps"] = {{"form_max", cfg.form_max.value},
                          {"minor", cfg.minor_cap.value},
                          {"medium", cfg.medium_cap.value},
                          {"major", cfg.major_cap.value}};
  j["landing_prep"] = {{"threshold_deg", cfg.landing_prep_threshold_deg},
                       {"penalty_tenths", cfg.landing_prep_penalty.value}};
  j["separation_missing_tenths"] = cfg.separation_missing.value;
  ojson flags;
  for (std::size_t i = 0; i < kLandingFlagCount; ++i)
    flags[std::string(kFlagNames[i])] = cfg.landing_flag_penalty[i].value;
  j["landing"] = {{"max", cfg.landing_max.value},
                  {"hand_contact_cap", cfg.hand_contact_cap.value},
                  {"body_contact_cap", cfg.body_contact_cap.value},
                  {"flags", flags}};
  return j.dump(2) + "\n";
}

RuleConfig rule_config_from_json(std::string_view text) {
  RuleConfig cfg;
  try {
    const auto j = ojson::parse(text);
    cfg.version = j.at("version").get<int>();
    if (cfg.version != 1)
      throw RuleError(RuleError::Kind::InvalidConfig, "unsupported rule config version " + std::to_string(cfg.version));
    cfg.takeoff_intercept_tenths = j.at("takeoff").at("intercept_tenths").get<int>();
    cfg.takeoff_degrees_per_tenth = j.at("takeoff").at("degrees_per_tenth").get<double>();
    cfg.early_start = scale_from_json(j.at("timing").at("early_start"));
    cfg.late_finish_double = scale_from_json(j.at("timing").at("late_finish_double"));
    cfg.late_finish_triple = scale_from_json(j.at("timing").at("late_finish_triple"));
    for (std::size_t i = 0; i < kFormCategoryCount; ++i)
      cfg.form[i] = scale_from_json(j.at("form").at(std::string(kFormNames[i])));
    const auto& caps = j.at("form_break_caps");
    cfg.form_max = Tenths{caps.at("form_max").get<int>()};
    cfg.minor_cap = Tenths{caps.at("minor").get<int>()};
    cfg.medium_cap = Tenths{caps.at("medium").get<int>()};
    cfg.major_cap = Tenths{caps.at("major").get<int>()};
    cfg.landing_prep_threshold_deg = j.at("landing_prep").at("threshold_deg").get<double>();
    cfg.landing_prep_penalty = Tenths{j.at("landing_prep").at("penalty_tenths").get<int>()};
    cfg.separation_missing = Tenths{j.at("separation_missing_tenths").get<int>()};
    const auto& landing = j.at("landing");
    cfg.landing_max = Tenths{landing.at("max").get<int>()};
    cfg.hand_contact_cap = Tenths{landing.at("hand_contact_cap").get<int>()};
    cfg.body_contact_cap = Tenths{landing.at("body_contact_cap").get<int>()};
    for (std::size_t i = 0; i < kLandingFlagCount; ++i)
      cfg.landing_flag_penalty[i] = Tenths{landing.at("flags").at(std::string(kFlagNames[i])).get<int>()};
  } catch (const nlohmann::json::exception& e) {
    throw RuleError(RuleError::Kind::InvalidConfig, std::string("rule config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw RuleError(RuleError::Kind::InvalidConfig, std::string("rule config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

RuleConfig load_rule_config(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw RuleError(RuleError::Kind::InvalidConfig, "cannot open rule config " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return rule_config_from_json(ss.str());
}

std::filesystem::path default_rule_config_path() {
  return std::filesystem::path(AERIALS_DATA_DIR) / "rules_default.json";
}

}  // namespace aerials
