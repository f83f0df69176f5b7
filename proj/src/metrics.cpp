#include "aerials/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

namespace aerials {

namespace {

void check_pair(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw MetricsError(MetricsError::Kind::LengthMismatch, "predicted and ground-truth lists differ in length");
  if (a.size() < 2) throw MetricsError(MetricsError::Kind::TooShort, "need at least two scores");
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double srcc(std::span<const double> predicted, std::span<const double> ground_truth) {
  check_pair(predicted, ground_truth);
  const auto rp = average_ranks(predicted);
  const auto rg = average_ranks(ground_truth);
  const double n = static_cast<double>(rp.size());
  const double mp = std::accumulate(rp.begin(), rp.end(), 0.0) / n;
  const double mg = std::accumulate(rg.begin(), rg.end(), 0.0) / n;
  double cov = 0, vp = 0, vg = 0;
  for (std::size_t i = 0; i < rp.size(); ++i) {
    cov += (rp[i] - mp) * (rg[i] - mg);
    vp += (rp[i] - mp) * (rp[i] - mp);
    vg += (rg[i] - mg) * (rg[i] - mg);
  }
  if (vp == 0 || vg == 0)
    throw MetricsError(MetricsError::Kind::DegenerateSeries, "rank correlation is undefined for a constant list");
  return std::clamp(cov / std::sqrt(vp * vg), -1.0, 1.0);
}

double rl2(const ScoreSeries& s) {
  check_pair(s.predicted, s.ground_truth);
  const double span = s.range.max - s.range.min;
  if (!(span > 0) || !std::isfinite(span))
    throw MetricsError(MetricsError::Kind::InvalidRange, "score range must satisfy max > min");
  double sum = 0;
  for (std::size_t i = 0; i < s.predicted.size(); ++i) {
    const double d = (s.ground_truth[i] - s.predicted[i]) / span;
    sum += d * d;
  }
  return 100.0 * sum / static_cast<double>(s.predicted.size());
}

std::map<std::string, double> read_score_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MetricsError(MetricsError::Kind::MissingId, "cannot open score file " + path.string());
  std::map<std::string, double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      const auto& score = j.at("final_score");
      const double v = score.is_string() ? std::stod(score.get<std::string>()) : score.get<double>();
      if (!out.emplace(j.at("id").get<std::string>(), v).second)
        throw std::invalid_argument("duplicate id");
    } catch (const std::exception& e) {
      throw MetricsError(MetricsError::Kind::MissingId,
                         path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

ScoreSeries load_series(const std::filesystem::path& predicted, const std::filesystem::path& ground_truth,
                        ScoreRange range) {
  const auto pred = read_score_file(predicted);
  const auto gt = read_score_file(ground_truth);
  ScoreSeries s;
  s.range = range;
  for (const auto& [id, v] : gt) {
    const auto it = pred.find(id);
    if (it == pred.end()) throw MetricsError(MetricsError::Kind::MissingId, "no prediction for jump " + id);
    s.ground_truth.push_back(v);
    s.predicted.push_back(it->second);
  }
  return s;
}

}  // namespace aerials
