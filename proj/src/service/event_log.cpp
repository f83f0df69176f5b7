#include "aerials/service/event_log.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

namespace aerials::service {

namespace {

constexpr std::array<std::string_view, 5> kKindNames{"CompetitionCreated", "JumpDeclared", "ObservationSubmitted",
                                                     "JudgeFinalized", "JumpFinalized"};

std::string errno_text() { return std::strerror(errno); }

}  // namespace

std::string_view event_kind_name(EventKind k) { return kKindNames[static_cast<std::size_t>(k)]; }

EventKind parse_event_kind(std::string_view s) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i)
    if (kKindNames[i] == s) return static_cast<EventKind>(i);
  throw std::invalid_argument("unknown event kind '" + std::string(s) + "'");
}

std::string event_to_line(const Event& e) {
  ordered_json j = {{"v", kEventLogVersion},
                    {"seq", e.seq},
                    {"ts", e.ts},
                    {"competition", e.competition_id},
                    {"kind", event_kind_name(e.kind)},
                    {"payload", e.payload}};
  return j.dump();
}

Event event_from_line(std::string_view line) {
  try {
    const auto j = ordered_json::parse(line);
    if (j.at("v").get<int>() != kEventLogVersion)
      throw CorruptLogError("unsupported event log version " + j.at("v").dump());
    Event e;
    e.seq = j.at("seq").get<std::uint64_t>();
    e.ts = j.at("ts").get<std::string>();
    e.competition_id = j.at("competition").get<std::string>();
    e.kind = parse_event_kind(j.at("kind").get<std::string>());
    e.payload = j.at("payload");
    if (!e.payload.is_object()) throw CorruptLogError("event payload must be an object");
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw CorruptLogError(std::string("malformed event line: ") + ex.what());
  } catch (const std::invalid_argument& ex) {
    throw CorruptLogError(std::string("malformed event line: ") + ex.what());
  }
}

std::vector<Event> parse_log(std::string_view text) {
  std::vector<Event> out;
  std::size_t start = 0, lineno = 0;
  while (start < text.size()) {
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) break;  // torn tail, never acknowledged
    ++lineno;
    const auto line = text.substr(start, nl - start);
    start = nl + 1;
    Event e;
    try {
      e = event_from_line(line);
    } catch (const CorruptLogError& ex) {
      throw CorruptLogError("line " + std::to_string(lineno) + ": " + ex.what());
    }
    const std::uint64_t expected = out.empty() ? 1 : out.back().seq + 1;
    if (e.seq != expected)
      throw CorruptLogError("line " + std::to_string(lineno) + ": sequence gap, expected " + std::to_string(expected) +
                            " got " + std::to_string(e.seq));
    out.push_back(std::move(e));
  }
  return out;
}

EventLog EventLog::open(const std::filesystem::path& path) {
  EventLog log(path);
  std::string text;
  if (std::filesystem::exists(path)) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StorageError("cannot read event log " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  log.events_ = parse_log(text);
  const auto keep = text.rfind('\n') == std::string::npos ? 0 : text.rfind('\n') + 1;

  log.fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (log.fd_ < 0) throw StorageError("cannot open event log " + path.string() + ": " + errno_text());
  if (keep != text.size() && ::ftruncate(log.fd_, static_cast<off_t>(keep)) != 0)
    throw StorageError("cannot truncate torn tail of " + path.string() + ": " + errno_text());
  return log;
}

EventLog::EventLog(EventLog&& other) noexcept
    : path_(std::move(other.path_)), fd_(other.fd_), events_(std::move(other.events_)) {
  other.fd_ = -1;
}

EventLog& EventLog::operator=(EventLog&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    path_ = std::move(other.path_);
    fd_ = other.fd_;
    events_ = std::move(other.events_);
    other.fd_ = -1;
  }
  return *this;
}

EventLog::~EventLog() {
  if (fd_ >= 0) ::close(fd_);
}

std::uint64_t EventLog::append(Event e) {
  e.seq = last_seq() + 1;
  const std::string line = event_to_line(e) + "\n";
  std::size_t written = 0;
  while (written < line.size()) {
    const auto n = ::write(fd_, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw StorageError("event log write failed: " + errno_text());
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(fd_) != 0) throw StorageError("event log fsync failed: " + errno_text());
  events_.push_back(std::move(e));
  return events_.back().seq;
}

}  // namespace aerials::service
