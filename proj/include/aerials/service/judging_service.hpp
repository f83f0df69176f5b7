#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "aerials/catalog.hpp"
#include "aerials/rulebook.hpp"
#include "aerials/scoring.hpp"
#include "aerials/service/event_log.hpp"

namespace aerials::service {

// Carries the HTTP status the API layer answers with.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, const std::string& what) : std::runtime_error(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

inline ServiceError validation_error(const std::string& what) { return {400, what}; }
inline ServiceError not_found(const std::string& what) { return {404, what}; }
inline ServiceError conflict(const std::string& what) { return {409, what}; }

inline constexpr int kJudgeSlots = 5;

struct FormObservation {
  std::vector<TwistTimingEvent> timing_events;
  std::vector<FormDeviation> form_deviations;
  bool separation_shown = true;

  friend bool operator==(const FormObservation&, const FormObservation&) = default;
};

struct JudgeSlot {
  std::optional<TakeoffObservation> air;
  std::optional<FormObservation> form;
  std::optional<LandingObservation> landing;
  bool finalized = false;

  bool complete() const { return air && form && landing; }
  friend bool operator==(const JudgeSlot&, const JudgeSlot&) = default;
};

struct LiveJump {
  std::string id;
  std::string athlete;
  Gender gender = Gender::Men;
  std::string code;
  DegreeOfDifficulty dd;
  StageBoundaries boundaries;
  std::vector<TimeSpan> sub_actions;
  std::array<JudgeSlot, kJudgeSlots> judges;
  bool finalized = false;

  friend bool operator==(const LiveJump&, const LiveJump&) = default;
};

// Everything the service knows about one competition. Holds observations only.
struct CompetitionState {
  std::string id;
  std::string name;
  std::vector<LiveJump> jumps;  // declaration order
  std::uint64_t last_seq = 0;

  const LiveJump* find(std::string_view jump_id) const;
  LiveJump* find(std::string_view jump_id);
  friend bool operator==(const CompetitionState&, const CompetitionState&) = default;
};

// Clip layout used when a declaration does not supply its own.
StageBoundaries default_boundaries();
// Equal partition of the form stage, millisecond aligned.
std::vector<TimeSpan> default_sub_actions(const StageBoundaries& b, int flips);

// Validates `e` against `state` and applies it. Throws ServiceError and leaves
// `state` untouched on rejection.
void apply_event(CompetitionState& state, const Event& e);

// Throws CorruptLogError if any event fails validation.
CompetitionState replay(const std::vector<Event>& events);

// Missing stages fall back to a clean observation.
ExecutionTrace judge_trace(const LiveJump& jump, int judge);
JudgeScore provisional_score(const LiveJump& jump, int judge, const RuleConfig& cfg);
// Only for finalized jumps.
PanelResult jump_panel(const LiveJump& jump, const RuleConfig& cfg);

// Parses an observation body for `stage` into its canonical stored form.
ordered_json normalize_observation(Stage stage, const ordered_json& body, const LiveJump& jump);

ordered_json live_jump_to_json(const LiveJump& jump, const RuleConfig& cfg);
ordered_json leaderboard_to_json(const CompetitionState& state, const RuleConfig& cfg);

std::string utc_timestamp();

struct DeclaredJump {
  std::string jump_id;
  DegreeOfDifficulty dd;
};

// One log file per competition in data_dir, named <id>.events.jsonl. Writes to
// a competition are serialized; readers get immutable snapshots.
class JudgingService {
 public:
  using Clock = std::function<std::string()>;

  JudgingService(std::filesystem::path data_dir, DifficultyCatalog catalog, RuleConfig rules,
                 Clock clock = utc_timestamp);
  ~JudgingService();

  std::string create_competition(const std::string& name = "");
  DeclaredJump declare_jump(const std::string& competition_id, const std::string& athlete, std::string_view gender,
                            std::string_view code, const ordered_json& layout = ordered_json::object());
  JudgeScore submit_observation(const std::string& jump_id, int judge, std::string_view stage,
                                const ordered_json& payload);
  JudgeScore finalize_judge(const std::string& jump_id, int judge);
  PanelResult finalize_jump(const std::string& jump_id);

  ordered_json jump_state(const std::string& jump_id) const;
  // Panel trace file for the jump; `aerials score` on it reproduces the panel.
  ordered_json jump_traces(const std::string& jump_id) const;
  ordered_json leaderboard(const std::string& competition_id) const;

  std::shared_ptr<const CompetitionState> snapshot(const std::string& competition_id) const;
  std::vector<std::string> competition_ids() const;
  const RuleConfig& rules() const { return rules_; }
  const std::filesystem::path& data_dir() const { return data_dir_; }

 private:
  struct Competition;

  Competition& competition(const std::string& id) const;
  Competition& competition_for_jump(const std::string& jump_id) const;
  std::shared_ptr<const CompetitionState> commit(Competition& c, EventKind kind, ordered_json payload);
  std::shared_ptr<const CompetitionState> snapshot_of(const Competition& c) const;

  std::filesystem::path data_dir_;
  DifficultyCatalog catalog_;
  RuleConfig rules_;
  Clock clock_;
  mutable std::shared_mutex registry_mu_;
  std::map<std::string, std::unique_ptr<Competition>> competitions_;
  std::uint64_t next_competition_ = 1;
};

}  // namespace aerials::service
