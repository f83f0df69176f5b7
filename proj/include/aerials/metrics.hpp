#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace aerials {

class MetricsError : public std::runtime_error {
 public:
  enum class Kind { LengthMismatch, TooShort, DegenerateSeries, InvalidRange, MissingId };
  MetricsError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct ScoreRange {
  double min = 0.0;
  double max = 0.0;
};

// Paired predicted / ground-truth scores on a scale [range.min, range.max].
struct ScoreSeries {
  std::vector<double> predicted;
  std::vector<double> ground_truth;
  ScoreRange range;
};

// Ranks starting at 1; tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

// Pearson correlation of average ranks.
double srcc(std::span<const double> predicted, std::span<const double> ground_truth);
inline double srcc(const ScoreSeries& s) { return srcc(s.predicted, s.ground_truth); }

// (100 / N) * sum(((gt - pred) / (max - min))^2)
double rl2(const ScoreSeries& s);

// Pairs two score files (JSONL with "id" and "final_score") on id. Every
// ground-truth id must be present in the predictions.
ScoreSeries load_series(const std::filesystem::path& predicted, const std::filesystem::path& ground_truth,
                        ScoreRange range);
std::map<std::string, double> read_score_file(const std::filesystem::path& path);

}  // namespace aerials
