#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aerials/fixed_point.hpp"

namespace aerials {

enum class Gender { Men, Women };

std::string_view gender_name(Gender g);  // "men" / "women"
Gender parse_gender(std::string_view s);  // accepts men/women, case-insensitive

struct DifficultyEntry {
  std::string code;
  std::string description;
  DegreeOfDifficulty dd_men;
  DegreeOfDifficulty dd_women;
};

class CatalogError : public std::runtime_error {
 public:
  CatalogError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "catalog line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class UnknownCodeError : public std::runtime_error {
 public:
  explicit UnknownCodeError(const std::string& code)
      : std::runtime_error("jump code '" + code + "' is not in the difficulty catalog"), code_(code) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// Women's DD for three-circle jumps is 1.06 x men's. Printed values were
// rounded to three decimals, so up to 5 ten-thousandths of slack is accepted.
inline constexpr int kWomenRatioPermille = 1060;
inline constexpr int kWomenRatioTolerance = 5;

// 1.06 x men, rounded to the nearest ten-thousandth.
DegreeOfDifficulty women_dd_from_ratio(DegreeOfDifficulty men);

// Immutable degree-of-difficulty table. Rows keep file order.
class DifficultyCatalog {
 public:
  // CSV with header `code,description,dd_men,dd_women`, DD written with 4 decimals.
  static DifficultyCatalog parse_csv(std::string_view text, std::string version = "unversioned");
  static DifficultyCatalog load(const std::filesystem::path& path);
  // The catalog file shipped in data/.
  static DifficultyCatalog load_default();
  static std::filesystem::path default_path();

  const std::vector<DifficultyEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const std::string& version() const { return version_; }

  const DifficultyEntry* find(std::string_view canonical_code) const;
  DegreeOfDifficulty max_dd() const;

  std::string to_csv() const;

 private:
  std::vector<DifficultyEntry> entries_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::string version_;
};

// Parses code_text (parse errors propagate), then looks up the exact table value.
DegreeOfDifficulty lookup_dd(const DifficultyCatalog& catalog, std::string_view code_text, Gender gender);

}  // namespace aerials
