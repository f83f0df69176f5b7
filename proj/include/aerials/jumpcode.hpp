#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace aerials {

enum class Direction { Back };
enum class BodyPosition { Tuck, Pike, Lay };

struct FlipElement {
  BodyPosition position = BodyPosition::Tuck;
  int twists = 0;  // 0..3, only for Lay

  friend bool operator==(const FlipElement&, const FlipElement&) = default;
};

struct JumpCode {
  Direction direction = Direction::Back;
  std::vector<FlipElement> flips;  // 1..3 somersaults
  std::string canonical_text;

  std::size_t flip_count() const { return flips.size(); }
  friend bool operator==(const JumpCode&, const JumpCode&) = default;
};

class JumpCodeError : public std::runtime_error {
 public:
  enum class Kind { MissingDirectionPrefix, UnknownToken, FlipCountOutOfRange, InvalidElement };

  JumpCodeError(Kind kind, std::size_t position, const std::string& what)
      : std::runtime_error(what), kind_(kind), position_(position) {}

  Kind kind() const { return kind_; }
  // Byte offset into the input where the problem was detected.
  std::size_t position() const { return position_; }

 private:
  Kind kind_;
  std::size_t position_;
};

// Lexical tokens of the code grammar. The direction prefix `b` is followed by
// one to three flip tokens.
enum class CodeToken { Back, Tuck, Pike, Lay, Full, DoubleFull, TripleFull };

struct LexedToken {
  CodeToken token;
  std::size_t offset;
};

// Greedy longest-match tokenizer over {b, tF, dF, F, T, P, L}.
// Throws JumpCodeError(UnknownToken) with the offending offset.
std::vector<LexedToken> tokenize(std::string_view text);

JumpCode parse_jump_code(std::string_view text);
std::string format_jump_code(const JumpCode& jump);

// "back-lay-tuck-full", "back-double full-full-double full".
std::string describe_jump(const JumpCode& jump);

// Builds a JumpCode from elements, validating the element invariants, and
// fills canonical_text.
JumpCode make_jump_code(std::vector<FlipElement> flips);

std::string_view position_name(BodyPosition p);

}  // namespace aerials
