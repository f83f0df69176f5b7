#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "aerials/scoring.hpp"

namespace aerials {

// One annotated jump as written to a dataset file (one JSON object per line).
struct DatasetRecord {
  std::string id;
  Gender gender = Gender::Men;
  std::string code;
  DegreeOfDifficulty dd;
  StageBoundaries boundaries;
  std::vector<TimeSpan> sub_actions;
  std::array<Tenths, 3> stage_scores{};  // air, form, landing (panel means)
  Hundredths final_score;
  std::vector<Deduction> deductions;

  friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

DatasetRecord make_record(const AnnotatedJump& jump);

// Serialized record without the trailing newline.
std::string serialize_record(const DatasetRecord& rec);
std::string emit_annotation(const AnnotatedJump& jump);

DatasetRecord parse_record(std::string_view line);

// Schema check for one line; returns the list of problems (empty when valid).
std::vector<std::string> validate_record(std::string_view line);

}  // namespace aerials
