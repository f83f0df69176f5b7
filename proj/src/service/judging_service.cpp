#include "aerials/service/judging_service.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <tuple>

#include "aerials/jumpcode.hpp"
#include "aerials/trace_io.hpp"

namespace aerials::service {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kLogSuffix = ".events.jsonl";

// Observation validity does not depend on the tunable tables, only on ranges
// and structure, so the pure state machine checks against the defaults.
const RuleConfig& reference_rules() {
  static const RuleConfig cfg = RuleConfig::defaults();
  return cfg;
}

double to_ms(double t) { return std::round(t * 1000.0) / 1000.0; }

template <class F>
auto as_validation(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ServiceError&) {
    throw;
  } catch (const std::exception& e) {
    throw validation_error(e.what());
  }
}

int judge_slot(const ordered_json& payload) {
  const int judge = payload.at("judge").get<int>();
  if (judge < 1 || judge > kJudgeSlots)
    throw validation_error("judge must be between 1 and " + std::to_string(kJudgeSlots) + ", got " +
                           std::to_string(judge));
  return judge;
}

LiveJump& open_jump(CompetitionState& s, const ordered_json& payload) {
  const auto id = payload.at("jump_id").get<std::string>();
  LiveJump* j = s.find(id);
  if (!j) throw not_found("unknown jump '" + id + "'");
  if (j->finalized) throw conflict("jump '" + id + "' is finalized");
  return *j;
}

FormObservation form_from_json(const ordered_json& j, double default_t) {
  FormObservation f;
  if (j.contains("timing_events"))
    for (const auto& ev : j.at("timing_events")) f.timing_events.push_back(timing_event_from_json(ev));
  if (j.contains("form_deviations"))
    for (const auto& d : j.at("form_deviations")) f.form_deviations.push_back(form_deviation_from_json(d, default_t));
  f.separation_shown = j.value("separation_shown", true);
  return f;
}

ordered_json form_to_json(const FormObservation& f) {
  ordered_json timing = ordered_json::array();
  for (const auto& ev : f.timing_events) timing.push_back(timing_event_to_json(ev));
  ordered_json devs = ordered_json::array();
  for (const auto& d : f.form_deviations) devs.push_back(form_deviation_to_json(d));
  return {{"timing_events", timing}, {"form_deviations", devs}, {"separation_shown", f.separation_shown}};
}

void apply_declared(CompetitionState& s, const ordered_json& p) {
  LiveJump j;
  j.id = p.at("jump_id").get<std::string>();
  if (s.find(j.id)) throw conflict("jump '" + j.id + "' already declared");
  j.athlete = p.at("athlete").get<std::string>();
  if (j.athlete.empty()) throw validation_error("athlete must not be empty");
  j.gender = parse_gender(p.at("gender").get<std::string>());
  const auto code = parse_jump_code(p.at("code").get<std::string>());
  j.code = code.canonical_text;
  j.dd = DegreeOfDifficulty(static_cast<int>(parse_fixed(p.at("dd").get<std::string>(), 4)));
  j.boundaries = boundaries_from_json(p.at("stage_boundaries"));
  j.sub_actions = sub_actions_from_json(p.at("sub_actions"));
  validate_trace(judge_trace(j, 1));
  s.jumps.push_back(std::move(j));
}

void apply_observation(CompetitionState& s, const ordered_json& p) {
  LiveJump& jump = open_jump(s, p);
  const int judge = judge_slot(p);
  JudgeSlot slot = jump.judges[judge - 1];
  if (slot.finalized) throw conflict("judge " + std::to_string(judge) + " already finalized jump '" + jump.id + "'");
  const Stage stage = parse_stage(p.at("stage").get<std::string>());
  const auto& obs = p.at("observation");
  switch (stage) {
    case Stage::Air:
      slot.air = takeoff_from_json(obs);
      break;
    case Stage::Form:
      slot.form = form_from_json(obs, jump.boundaries.form().midpoint());
      break;
    case Stage::Landing:
      slot.landing = landing_from_json(obs);
      break;
  }
  LiveJump candidate = jump;
  candidate.judges[judge - 1] = slot;
  score_trace(judge_trace(candidate, judge), reference_rules());
  jump.judges[judge - 1] = std::move(slot);
}

void apply_judge_finalized(CompetitionState& s, const ordered_json& p) {
  LiveJump& jump = open_jump(s, p);
  const int judge = judge_slot(p);
  JudgeSlot& slot = jump.judges[judge - 1];
  if (slot.finalized) throw conflict("judge " + std::to_string(judge) + " already finalized jump '" + jump.id + "'");
  if (!slot.complete())
    throw validation_error("judge " + std::to_string(judge) + " has not submitted all three stages for '" + jump.id +
                           "'");
  slot.finalized = true;
}

void apply_jump_finalized(CompetitionState& s, const ordered_json& p) {
  LiveJump& jump = open_jump(s, p);
  const auto done = std::count_if(jump.judges.begin(), jump.judges.end(), [](const JudgeSlot& j) { return j.finalized; });
  if (done != kJudgeSlots)
    throw validation_error("jump '" + jump.id + "' has " + std::to_string(done) + " of " +
                           std::to_string(kJudgeSlots) + " judges finalized");
  jump.finalized = true;
}

}  // namespace

const LiveJump* CompetitionState::find(std::string_view jump_id) const {
  for (const auto& j : jumps)
    if (j.id == jump_id) return &j;
  return nullptr;
}

LiveJump* CompetitionState::find(std::string_view jump_id) {
  return const_cast<LiveJump*>(std::as_const(*this).find(jump_id));
}

StageBoundaries default_boundaries() { return {0.0, 1.6, 4.6, 7.7}; }

std::vector<TimeSpan> default_sub_actions(const StageBoundaries& b, int flips) {
  std::vector<TimeSpan> out;
  const double width = (b.t2 - b.t1) / flips;
  for (int i = 0; i < flips; ++i) {
    const double start = i == 0 ? b.t1 : out.back().end;
    const double end = i + 1 == flips ? b.t2 : to_ms(b.t1 + width * (i + 1));
    out.push_back({start, end});
  }
  return out;
}

void apply_event(CompetitionState& state, const Event& e) {
  if (e.seq != state.last_seq + 1)
    throw validation_error("event seq " + std::to_string(e.seq) + " does not follow " +
                           std::to_string(state.last_seq));
  CompetitionState next = state;
  as_validation([&] {
    if (e.kind == EventKind::CompetitionCreated) {
      if (!state.id.empty()) throw conflict("competition '" + state.id + "' already created");
      if (e.competition_id.empty()) throw validation_error("competition id must not be empty");
      next.id = e.competition_id;
      next.name = e.payload.value("name", std::string());
      return;
    }
    if (state.id.empty()) throw validation_error("first event must be CompetitionCreated");
    if (e.competition_id != state.id)
      throw validation_error("event for competition '" + e.competition_id + "' in log of '" + state.id + "'");
    switch (e.kind) {
      case EventKind::JumpDeclared:
        apply_declared(next, e.payload);
        break;
      case EventKind::ObservationSubmitted:
        apply_observation(next, e.payload);
        break;
      case EventKind::JudgeFinalized:
        apply_judge_finalized(next, e.payload);
        break;
      case EventKind::JumpFinalized:
        apply_jump_finalized(next, e.payload);
        break;
      case EventKind::CompetitionCreated:
        break;
    }
  });
  next.last_seq = e.seq;
  state = std::move(next);
}

CompetitionState replay(const std::vector<Event>& events) {
  CompetitionState state;
  for (const auto& e : events) {
    try {
      apply_event(state, e);
    } catch (const ServiceError& ex) {
      throw CorruptLogError("event " + std::to_string(e.seq) + " (" + std::string(event_kind_name(e.kind)) +
                            ") rejected on replay: " + ex.what());
    }
  }
  return state;
}

ExecutionTrace judge_trace(const LiveJump& jump, int judge) {
  const JudgeSlot& slot = jump.judges.at(static_cast<std::size_t>(judge - 1));
  ExecutionTrace t;
  t.code_text = jump.code;
  t.gender = jump.gender;
  t.boundaries = jump.boundaries;
  t.sub_actions = jump.sub_actions;
  if (slot.air) t.takeoff = *slot.air;
  if (slot.form) {
    t.timing_events = slot.form->timing_events;
    t.form_deviations = slot.form->form_deviations;
    t.separation_shown = slot.form->separation_shown;
  }
  if (slot.landing) t.landing = *slot.landing;
  return t;
}

JudgeScore provisional_score(const LiveJump& jump, int judge, const RuleConfig& cfg) {
  return score_trace(judge_trace(jump, judge), cfg);
}

PanelResult jump_panel(const LiveJump& jump, const RuleConfig& cfg) {
  if (!jump.finalized) throw validation_error("jump '" + jump.id + "' is not finalized");
  std::vector<JudgeScore> scores;
  for (int judge = 1; judge <= kJudgeSlots; ++judge) scores.push_back(provisional_score(jump, judge, cfg));
  return aggregate_panel(scores, jump.dd);
}

ordered_json normalize_observation(Stage stage, const ordered_json& body, const LiveJump& jump) {
  return as_validation([&]() -> ordered_json {
    if (!body.is_object()) throw validation_error("observation payload must be an object");
    switch (stage) {
      case Stage::Air:
        return takeoff_to_json(takeoff_from_json(body));
      case Stage::Form:
        return form_to_json(form_from_json(body, jump.boundaries.form().midpoint()));
      case Stage::Landing:
        return landing_to_json(landing_from_json(body));
    }
    throw validation_error("unknown stage");
  });
}

ordered_json live_jump_to_json(const LiveJump& jump, const RuleConfig& cfg) {
  ordered_json judges = ordered_json::array();
  for (int n = 1; n <= kJudgeSlots; ++n) {
    const JudgeSlot& slot = jump.judges[n - 1];
    ordered_json obs = ordered_json::object();
    if (slot.air) obs["air"] = takeoff_to_json(*slot.air);
    if (slot.form) obs["form"] = form_to_json(*slot.form);
    if (slot.landing) obs["landing"] = landing_to_json(*slot.landing);
    judges.push_back({{"judge", n},
                      {"finalized", slot.finalized},
                      {"observations", obs},
                      {"provisional_judge_score", judge_score_to_json(provisional_score(jump, n, cfg))}});
  }
  return {{"jump_id", jump.id},
          {"athlete", jump.athlete},
          {"gender", gender_name(jump.gender)},
          {"code", jump.code},
          {"description", describe_jump(parse_jump_code(jump.code))},
          {"dd", format_dd(jump.dd)},
          {"stage_boundaries", boundaries_to_json(jump.boundaries)},
          {"sub_actions", sub_actions_to_json(jump.sub_actions)},
          {"finalized", jump.finalized},
          {"judges", judges},
          {"panel", jump.finalized ? panel_to_json(jump_panel(jump, cfg)) : ordered_json()}};
}

ordered_json leaderboard_to_json(const CompetitionState& state, const RuleConfig& cfg) {
  std::map<std::string, Hundredths> best;
  for (const auto& j : state.jumps) {
    if (!j.finalized) continue;
    const Hundredths score = jump_panel(j, cfg).final_score;
    auto [it, inserted] = best.emplace(j.athlete, score);
    if (!inserted && it->second < score) it->second = score;
  }
  std::vector<std::pair<std::string, Hundredths>> rows(best.begin(), best.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return b.second < a.second; });
  ordered_json out = ordered_json::array();
  for (const auto& [athlete, score] : rows) out.push_back({{"athlete", athlete}, {"best_final", format_hundredths(score)}});
  return out;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  const std::time_t secs = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[40];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

// ---------------------------------------------------------------------------

struct JudgingService::Competition {
  std::mutex write_mu;
  mutable std::mutex snap_mu;
  std::optional<EventLog> log;
  std::shared_ptr<const CompetitionState> state;
};

JudgingService::JudgingService(fs::path data_dir, DifficultyCatalog catalog, RuleConfig rules, Clock clock)
    : data_dir_(std::move(data_dir)), catalog_(std::move(catalog)), rules_(std::move(rules)), clock_(std::move(clock)) {
  fs::create_directories(data_dir_);
  for (const auto& entry : fs::directory_iterator(data_dir_)) {
    const auto name = entry.path().filename().string();
    if (!entry.is_regular_file() || name.size() <= kLogSuffix.size() || !name.ends_with(kLogSuffix)) continue;
    const auto id = name.substr(0, name.size() - kLogSuffix.size());
    auto c = std::make_unique<Competition>();
    c->log.emplace(EventLog::open(entry.path()));
    if (c->log->events().empty()) continue;
    auto state = std::make_shared<CompetitionState>(replay(c->log->events()));
    if (state->id != id) throw CorruptLogError("log " + name + " belongs to competition '" + state->id + "'");
    c->state = std::move(state);
    if (id.size() > 1 && id[0] == 'c' && std::all_of(id.begin() + 1, id.end(), ::isdigit))
      next_competition_ = std::max<std::uint64_t>(next_competition_, std::stoull(id.substr(1)) + 1);
    competitions_.emplace(id, std::move(c));
  }
}

JudgingService::~JudgingService() = default;

JudgingService::Competition& JudgingService::competition(const std::string& id) const {
  std::shared_lock lock(registry_mu_);
  const auto it = competitions_.find(id);
  if (it == competitions_.end()) throw not_found("unknown competition '" + id + "'");
  return *it->second;
}

JudgingService::Competition& JudgingService::competition_for_jump(const std::string& jump_id) const {
  const auto cut = jump_id.rfind("-j");
  if (cut == std::string::npos) throw not_found("unknown jump '" + jump_id + "'");
  try {
    return competition(jump_id.substr(0, cut));
  } catch (const ServiceError&) {
    throw not_found("unknown jump '" + jump_id + "'");
  }
}

std::shared_ptr<const CompetitionState> JudgingService::snapshot_of(const Competition& c) const {
  std::lock_guard lock(c.snap_mu);
  return c.state;
}

std::shared_ptr<const CompetitionState> JudgingService::commit(Competition& c, EventKind kind, ordered_json payload) {
  // Caller holds c.write_mu.
  const auto current = snapshot_of(c);
  auto next = std::make_shared<CompetitionState>(current ? *current : CompetitionState{});
  Event e;
  e.seq = c.log->last_seq() + 1;
  e.ts = clock_();
  e.competition_id = current ? current->id : std::string();
  e.kind = kind;
  e.payload = std::move(payload);
  if (kind == EventKind::CompetitionCreated) e.competition_id = e.payload.at("id").get<std::string>();
  if (kind == EventKind::CompetitionCreated) e.payload.erase("id");
  apply_event(*next, e);
  try {
    c.log->append(std::move(e));
  } catch (const StorageError& ex) {
    throw ServiceError(500, ex.what());
  }
  std::lock_guard lock(c.snap_mu);
  c.state = next;
  return next;
}

std::string JudgingService::create_competition(const std::string& name) {
  std::unique_lock lock(registry_mu_);
  std::string id;
  fs::path path;
  do {
    id = "c" + std::to_string(next_competition_++);
    path = data_dir_ / (id + std::string(kLogSuffix));
  } while (competitions_.contains(id) || fs::exists(path));
  auto c = std::make_unique<Competition>();
  try {
    c->log.emplace(EventLog::open(path));
  } catch (const StorageError& ex) {
    throw ServiceError(500, ex.what());
  }
  std::lock_guard write(c->write_mu);
  commit(*c, EventKind::CompetitionCreated, {{"id", id}, {"name", name}});
  competitions_.emplace(id, std::move(c));
  return id;
}

DeclaredJump JudgingService::declare_jump(const std::string& competition_id, const std::string& athlete,
                                          std::string_view gender, std::string_view code, const ordered_json& layout) {
  Competition& c = competition(competition_id);
  const auto [g, jc, dd] = as_validation([&] {
    const Gender g = parse_gender(gender);
    JumpCode jc = parse_jump_code(code);
    const DegreeOfDifficulty dd = lookup_dd(catalog_, jc.canonical_text, g);
    return std::tuple{g, jc, dd};
  });
  const auto [bounds, subs] = as_validation([&] {
    const auto b = layout.contains("stage_boundaries") ? boundaries_from_json(layout.at("stage_boundaries"))
                                                       : default_boundaries();
    auto s = layout.contains("sub_actions") ? sub_actions_from_json(layout.at("sub_actions"))
                                            : default_sub_actions(b, jc.flip_count());
    return std::pair{b, s};
  });

  std::lock_guard write(c.write_mu);
  const auto state = snapshot_of(c);
  const std::string jump_id = competition_id + "-j" + std::to_string(state->jumps.size() + 1);
  commit(c, EventKind::JumpDeclared,
         {{"jump_id", jump_id},
          {"athlete", athlete},
          {"gender", gender_name(g)},
          {"code", jc.canonical_text},
          {"dd", format_dd(dd)},
          {"stage_boundaries", boundaries_to_json(bounds)},
          {"sub_actions", sub_actions_to_json(subs)}});
  return {jump_id, dd};
}

JudgeScore JudgingService::submit_observation(const std::string& jump_id, int judge, std::string_view stage_text,
                                              const ordered_json& payload) {
  Competition& c = competition_for_jump(jump_id);
  const Stage stage = as_validation([&] { return parse_stage(stage_text); });
  std::lock_guard write(c.write_mu);
  const auto state = snapshot_of(c);
  const LiveJump* jump = state->find(jump_id);
  if (!jump) throw not_found("unknown jump '" + jump_id + "'");
  if (jump->finalized) throw conflict("jump '" + jump_id + "' is finalized");
  const auto next = commit(c, EventKind::ObservationSubmitted,
                           {{"jump_id", jump_id},
                            {"judge", judge},
                            {"stage", stage_name(stage)},
                            {"observation", normalize_observation(stage, payload, *jump)}});
  return provisional_score(*next->find(jump_id), judge, rules_);
}

JudgeScore JudgingService::finalize_judge(const std::string& jump_id, int judge) {
  Competition& c = competition_for_jump(jump_id);
  std::lock_guard write(c.write_mu);
  const auto next = commit(c, EventKind::JudgeFinalized, {{"jump_id", jump_id}, {"judge", judge}});
  return provisional_score(*next->find(jump_id), judge, rules_);
}

PanelResult JudgingService::finalize_jump(const std::string& jump_id) {
  Competition& c = competition_for_jump(jump_id);
  std::lock_guard write(c.write_mu);
  const auto next = commit(c, EventKind::JumpFinalized, {{"jump_id", jump_id}});
  return jump_panel(*next->find(jump_id), rules_);
}

ordered_json JudgingService::jump_state(const std::string& jump_id) const {
  const auto state = snapshot_of(competition_for_jump(jump_id));
  const LiveJump* jump = state->find(jump_id);
  if (!jump) throw not_found("unknown jump '" + jump_id + "'");
  return live_jump_to_json(*jump, rules_);
}

ordered_json JudgingService::jump_traces(const std::string& jump_id) const {
  const auto state = snapshot_of(competition_for_jump(jump_id));
  const LiveJump* jump = state->find(jump_id);
  if (!jump) throw not_found("unknown jump '" + jump_id + "'");
  std::vector<ExecutionTrace> traces;
  for (int n = 1; n <= kJudgeSlots; ++n) traces.push_back(judge_trace(*jump, n));
  return panel_file_to_json(traces);
}

ordered_json JudgingService::leaderboard(const std::string& competition_id) const {
  return leaderboard_to_json(*snapshot_of(competition(competition_id)), rules_);
}

std::shared_ptr<const CompetitionState> JudgingService::snapshot(const std::string& competition_id) const {
  return snapshot_of(competition(competition_id));
}

std::vector<std::string> JudgingService::competition_ids() const {
  std::shared_lock lock(registry_mu_);
  std::vector<std::string> out;
  for (const auto& [id, _] : competitions_) out.push_back(id);
  return out;
}

}  // namespace aerials::service
