#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "aerials/metrics.hpp"
#include "aerials/simulator.hpp"

using namespace aerials;

namespace {

// Textbook Spearman for untied data: 1 - 6 sum(d^2) / (n (n^2 - 1)).
double spearman_no_ties(const std::vector<int>& perm) {
  const double n = static_cast<double>(perm.size());
  double d2 = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    const double d = static_cast<double>(perm[i]) - static_cast<double>(i);
    d2 += d * d;
  }
  return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

std::vector<double> as_double(const std::vector<int>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("average ranks") {
  const std::vector<double> v{10, 20, 20, 5};
  CHECK(average_ranks(v) == std::vector<double>{2, 3.5, 3.5, 1});
}

TEST_CASE("srcc matches the closed form on every permutation up to n = 6") {
  for (int n = 2; n <= 6; ++n) {
    std::vector<int> perm(n), base(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::iota(base.begin(), base.end(), 0);
    do {
      CHECK(std::abs(srcc(as_double(perm), as_double(base)) - spearman_no_ties(perm)) <= 1e-12);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

TEST_CASE("srcc with ties and error cases") {
  const std::vector<double> a{1, 2, 2, 3}, b{1, 2, 3, 4};
  CHECK(srcc(a, b) == doctest::Approx(0.9486832980505138));
  CHECK(srcc(b, b) == 1.0);
  std::vector<double> rev(b.rbegin(), b.rend());
  CHECK(srcc(rev, b) == -1.0);
  CHECK_THROWS_AS(srcc(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), MetricsError);
  CHECK_THROWS_AS(srcc(std::vector<double>{1}, std::vector<double>{1}), MetricsError);
  CHECK_THROWS_AS(srcc(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}), MetricsError);
}

TEST_CASE("rl2") {
  ScoreSeries s{{0, 10}, {0, 10}, {0, 10}};
  CHECK(rl2(s) == 0.0);
  s = {{10, 0}, {0, 10}, {0, 10}};
  CHECK(rl2(s) == 100.0);
  s = {{5, 5}, {0, 10}, {0, 10}};
  CHECK(rl2(s) == 25.0);
  s.range = {3, 3};
  CHECK_THROWS_AS(rl2(s), MetricsError);
}

TEST_CASE("perfect predictor on a simulated dataset") {
  SimConfig cfg;
  cfg.jump_count = 200;
  const auto out = run_simulation(cfg, DifficultyCatalog::load_default(), RuleConfig::defaults(), "m.jsonl");
  const auto path = std::filesystem::temp_directory_path() / "aerials_metrics_gt.jsonl";
  std::ofstream(path) << out.dataset;
  const auto s = load_series(path, path, {0.0, 61.215});
  CHECK(s.predicted.size() == 200);
  CHECK(srcc(s) == 1.0);
  CHECK(rl2(s) == 0.0);

  const auto partial = std::filesystem::temp_directory_path() / "aerials_metrics_pred.jsonl";
  std::ofstream(partial) << out.dataset.substr(0, out.dataset.find('\n') + 1);
  CHECK_THROWS_AS(load_series(partial, path, {0.0, 61.215}), MetricsError);
  std::filesystem::remove(path);
  std::filesystem::remove(partial);
}
