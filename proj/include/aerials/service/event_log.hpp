#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace aerials::service {

using ordered_json = nlohmann::ordered_json;

enum class EventKind { CompetitionCreated, JumpDeclared, ObservationSubmitted, JudgeFinalized, JumpFinalized };

std::string_view event_kind_name(EventKind k);
EventKind parse_event_kind(std::string_view s);

// Log line format version written as "v".
inline constexpr int kEventLogVersion = 1;

struct Event {
  std::uint64_t seq = 0;
  std::string ts;  // ISO-8601 UTC wall clock; informational only
  std::string competition_id;
  EventKind kind = EventKind::CompetitionCreated;
  ordered_json payload = ordered_json::object();
};

// {"v":1,"seq":3,"ts":"...","competition":"c1","kind":"JumpDeclared","payload":{...}}
std::string event_to_line(const Event& e);
Event event_from_line(std::string_view line);

class StorageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CorruptLogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Append-only JSONL file. Every append is written and fsync'd before it
// returns. On open, a trailing line without its newline is an unacknowledged
// torn write and is cut off; any other malformed line or a sequence gap is
// reported as CorruptLogError.
class EventLog {
 public:
  static EventLog open(const std::filesystem::path& path);

  EventLog(EventLog&& other) noexcept;
  EventLog& operator=(EventLog&& other) noexcept;
  EventLog(const EventLog&) = delete;
  EventLog& operator=(const EventLog&) = delete;
  ~EventLog();

  const std::vector<Event>& events() const { return events_; }
  std::uint64_t last_seq() const { return events_.empty() ? 0 : events_.back().seq; }
  const std::filesystem::path& path() const { return path_; }

  // Assigns seq = last_seq() + 1, persists, and returns the seq.
  std::uint64_t append(Event e);

 private:
  explicit EventLog(std::filesystem::path path) : path_(std::move(path)) {}

  std::filesystem::path path_;
  int fd_ = -1;
  std::vector<Event> events_;
};

// Parses a whole log image (used by open and by tests).
std::vector<Event> parse_log(std::string_view text);

}  // namespace aerials::service
