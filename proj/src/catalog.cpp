#include "aerials/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "aerials/jumpcode.hpp"

namespace aerials {

namespace {

constexpr std::string_view kHeader = "code,description,dd_men,dd_women";

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::string_view gender_name(Gender g) { return g == Gender::Men ? "men" : "women"; }

Gender parse_gender(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "men" || lower == "m") return Gender::Men;
  if (lower == "women" || lower == "w") return Gender::Women;
  throw std::invalid_argument("unknown gender '" + std::string(s) + "' (expected men or women)");
}

DegreeOfDifficulty women_dd_from_ratio(DegreeOfDifficulty men) {
  return DegreeOfDifficulty{(men.value * kWomenRatioPermille + 500) / 1000};
}

DifficultyCatalog DifficultyCatalog::parse_csv(std::string_view text, std::string version) {
  DifficultyCatalog cat;
  cat.version_ = std::move(version);
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!saw_header) {
      if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
      if (line != kHeader) throw CatalogError(lineno, "expected header '" + std::string(kHeader) + "'");
      saw_header = true;
      continue;
    }
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 4) throw CatalogError(lineno, "expected 4 fields, got " + std::to_string(fields.size()));
    DifficultyEntry e;
    e.code = fields[0];
    e.description = fields[1];
    try {
      e.dd_men = DegreeOfDifficulty{static_cast<int>(parse_fixed(fields[2], 4))};
      e.dd_women = DegreeOfDifficulty{static_cast<int>(parse_fixed(fields[3], 4))};
    } catch (const std::invalid_argument& ex) {
      throw CatalogError(lineno, std::string(ex.what()) + " (DD needs exactly 4 decimals)");
    }
    if (e.dd_men.value <= 0 || e.dd_women.value <= 0) throw CatalogError(lineno, "DD must be positive");

    JumpCode jump;
    try {
      jump = parse_jump_code(e.code);
    } catch (const JumpCodeError& ex) {
      throw CatalogError(lineno, ex.what());
    }
    if (jump.canonical_text != e.code) throw CatalogError(lineno, "code '" + e.code + "' is not canonical");

    if (jump.flip_count() == 3) {
      const int expected = women_dd_from_ratio(e.dd_men).value;
      if (std::abs(expected - e.dd_women.value) > kWomenRatioTolerance)
        throw CatalogError(lineno, "women's DD for " + e.code + " deviates from 1.06 x men's");
    } else if (e.dd_women != e.dd_men) {
      throw CatalogError(lineno, "women's DD must equal men's for one- and two-circle code " + e.code);
    }

    if (cat.index_.count(e.code)) throw CatalogError(lineno, "duplicate code " + e.code);
    cat.index_.emplace(e.code, cat.entries_.size());
    cat.entries_.push_back(std::move(e));
  }
  if (!saw_header) throw CatalogError(0, "empty catalog");
  return cat;
}

DifficultyCatalog DifficultyCatalog::load(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CatalogError(0, "cannot open catalog file " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_csv(ss.str(), path.stem().string());
}

std::filesystem::path DifficultyCatalog::default_path() {
  return std::filesystem::path(AERIALS_DATA_DIR) / "dd_catalog_v1.csv";
}

DifficultyCatalog DifficultyCatalog::load_default() { return load(default_path()); }

const DifficultyEntry* DifficultyCatalog::find(std::string_view canonical_code) const {
  const auto it = index_.find(canonical_code);
  return it == index_.end() ? nullptr : &entries_[it->second];
}

DegreeOfDifficulty DifficultyCatalog::max_dd() const {
  DegreeOfDifficulty best{0};
  for (const auto& e : entries_) best = std::max({best, e.dd_men, e.dd_women});
  return best;
}

std::string DifficultyCatalog::to_csv() const {
  std::string out(kHeader);
  out += '\n';
  for (const auto& e : entries_)
    out += e.code + ',' + e.description + ',' + format_dd(e.dd_men) + ',' + format_dd(e.dd_women) + '\n';
  return out;
}

DegreeOfDifficulty lookup_dd(const DifficultyCatalog& catalog, std::string_view code_text, Gender gender) {
  JumpCode jump;
  try {
    jump = parse_jump_code(code_text);
  } catch (const JumpCodeError& ex) {
    // Letters outside the code alphabet cannot name any catalog row.
    if (ex.kind() == JumpCodeError::Kind::UnknownToken) throw UnknownCodeError(std::string(code_text));
    throw;
  }
  const auto* e = catalog.find(jump.canonical_text);
  if (!e) throw UnknownCodeError(jump.canonical_text);
  return gender == Gender::Men ? e->dd_men : e->dd_women;
}

}  // namespace aerials
