#include "aerials/jumpcode.hpp"

namespace aerials {

namespace {

constexpr std::size_t kMaxFlips = 3;
constexpr int kMaxTwists = 3;

FlipElement element_for(CodeToken t) {
  switch (t) {
    case CodeToken::Tuck: return {BodyPosition::Tuck, 0};
    case CodeToken::Pike: return {BodyPosition::Pike, 0};
    case CodeToken::Lay: return {BodyPosition::Lay, 0};
    case CodeToken::Full: return {BodyPosition::Lay, 1};
    case CodeToken::DoubleFull: return {BodyPosition::Lay, 2};
    case CodeToken::TripleFull: return {BodyPosition::Lay, 3};
    case CodeToken::Back: break;
  }
  throw std::logic_error("element_for: direction token has no flip element");
}

std::string_view token_text(const FlipElement& e) {
  switch (e.position) {
    case BodyPosition::Tuck: return "T";
    case BodyPosition::Pike: return "P";
    case BodyPosition::Lay: break;
  }
  switch (e.twists) {
    case 0: return "L";
    case 1: return "F";
    case 2: return "dF";
    default: return "tF";
  }
}

std::string_view element_name(const FlipElement& e) {
  switch (e.position) {
    case BodyPosition::Tuck: return "tuck";
    case BodyPosition::Pike: return "pike";
    case BodyPosition::Lay: break;
  }
  switch (e.twists) {
    case 0: return "lay";
    case 1: return "full";
    case 2: return "double full";
    default: return "triple full";
  }
}

void validate_elements(const std::vector<FlipElement>& flips) {
  if (flips.empty() || flips.size() > kMaxFlips)
    throw JumpCodeError(JumpCodeError::Kind::FlipCountOutOfRange, 0,
                        "jump code must have 1 to 3 flips, got " + std::to_string(flips.size()));
  for (std::size_t i = 0; i < flips.size(); ++i) {
    const auto& e = flips[i];
    if (e.twists < 0 || e.twists > kMaxTwists || (e.twists > 0 && e.position != BodyPosition::Lay))
      throw JumpCodeError(JumpCodeError::Kind::InvalidElement, i,
                          "flip " + std::to_string(i + 1) + ": twists require the lay position and must be 0..3");
  }
}

}  // namespace

std::vector<LexedToken> tokenize(std::string_view text) {
  std::vector<LexedToken> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if ((c == 't' || c == 'd') && i + 1 < text.size() && text[i + 1] == 'F') {
      out.push_back({c == 't' ? CodeToken::TripleFull : CodeToken::DoubleFull, i});
      i += 2;
      continue;
    }
    CodeToken t;
    switch (c) {
      case 'b': t = CodeToken::Back; break;
      case 'F': t = CodeToken::Full; break;
      case 'T': t = CodeToken::Tuck; break;
      case 'P': t = CodeToken::Pike; break;
      case 'L': t = CodeToken::Lay; break;
      default:
        throw JumpCodeError(JumpCodeError::Kind::UnknownToken, i,
                            "unknown token at offset " + std::to_string(i) + " in '" + std::string(text) + "'");
    }
    out.push_back({t, i});
    ++i;
  }
  return out;
}

JumpCode parse_jump_code(std::string_view text) {
  if (text.empty() || text.front() != 'b')
    throw JumpCodeError(JumpCodeError::Kind::MissingDirectionPrefix, 0,
                        "jump code '" + std::string(text) + "' must start with direction prefix 'b'");
  const auto tokens = tokenize(text);
  std::vector<FlipElement> flips;
  for (auto it = tokens.begin() + 1; it != tokens.end(); ++it) {
    const auto& tok = *it;
    if (tok.token == CodeToken::Back)
      throw JumpCodeError(JumpCodeError::Kind::UnknownToken, tok.offset,
                          "unexpected direction token at offset " + std::to_string(tok.offset));
    flips.push_back(element_for(tok.token));
  }
  if (flips.empty() || flips.size() > kMaxFlips)
    throw JumpCodeError(JumpCodeError::Kind::FlipCountOutOfRange, text.size(),
                        "jump code '" + std::string(text) + "' has " + std::to_string(flips.size()) +
                            " flips; expected 1 to 3");
  return make_jump_code(std::move(flips));
}

JumpCode make_jump_code(std::vector<FlipElement> flips) {
  validate_elements(flips);
  JumpCode jump;
  jump.flips = std::move(flips);
  jump.canonical_text = format_jump_code(jump);
  return jump;
}

std::string format_jump_code(const JumpCode& jump) {
  std::string out = "b";
  for (const auto& e : jump.flips) out += token_text(e);
  return out;
}

std::string describe_jump(const JumpCode& jump) {
  std::string out = "back";
  for (const auto& e : jump.flips) {
    out += '-';
    out += element_name(e);
  }
  return out;
}

std::string_view position_name(BodyPosition p) {
  switch (p) {
    case BodyPosition::Tuck: return "tuck";
    case BodyPosition::Pike: return "pike";
    case BodyPosition::Lay: return "lay";
  }
  return "?";
}

}  // namespace aerials
