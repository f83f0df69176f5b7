#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "aerials/dataset.hpp"
#include "aerials/digest.hpp"
#include "aerials/simulator.hpp"

using namespace aerials;

namespace {

const RuleConfig kCfg = RuleConfig::defaults();
const DifficultyCatalog& catalog() {
  static const auto c = DifficultyCatalog::load_default();
  return c;
}

SimulationOutput run(SimConfig cfg) { return run_simulation(cfg, catalog(), kCfg, "d.jsonl"); }

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("sha256 digest") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("same seed gives byte-identical output regardless of thread count") {
  SimConfig cfg;
  cfg.jump_count = 60;
  cfg.threads = 1;
  const auto a = run(cfg);
  cfg.threads = 4;
  const auto b = run(cfg);
  CHECK(a.dataset == b.dataset);
  CHECK(a.manifest == b.manifest);
  cfg.seed = 8;
  CHECK(run(cfg).dataset != a.dataset);
}

TEST_CASE("streams are independent of draw order elsewhere") {
  RngStream a(7, 1, 2, 3), b(7, 1, 2, 3), c(7, 1, 2, 4);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  CHECK(RngStream(7, 1, 2, 3).next() != c.next());
  RngStream u(1, 0, 0, 0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
    REQUIRE(u.index(7) < 7);
  }
}

TEST_CASE("a flawless athlete scores 10.0 from every judge") {
  AthleteProfile p{"A01", Gender::Women, 1.0, {"bdFFdF"}};
  SimConfig cfg;
  for (std::uint64_t j = 0; j < 200; ++j) {
    RngStream rng(7, 0, j, RngStream::kTraceSlot);
    const auto t = sample_trace(p, "bdFFdF", cfg.rates, rng);
    CHECK(score_trace(t, kCfg).total == Tenths{100});
  }
}

TEST_CASE("skill 0 take-off miss rate") {
  AthleteProfile p{"A01", Gender::Men, 0.0, {"bFF"}};
  const ErrorRates rates;
  int missed = 0;
  constexpr int kDraws = 20000;
  for (std::uint64_t j = 0; j < kDraws; ++j) {
    RngStream rng(1, 0, j, RngStream::kTraceSlot);
    missed += sample_trace(p, "bFF", rates, rng).takeoff.missed ? 1 : 0;
  }
  // Expected 0.05; binomial standard error is about 0.0015.
  CHECK(static_cast<double>(missed) / kDraws == doctest::Approx(rates.takeoff_miss_prob).epsilon(0.1));
  CHECK(missed == SKILL0_MISSED_FROZEN);
}

TEST_CASE("judge perception noise is unbiased") {
  auto t = aerials::ExecutionTrace{};
  t.code_text = "bFF";
  t.takeoff.deviation_deg = 50.0;
  SimConfig cfg;
  double sum = 0;
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) {
    RngStream rng(3, 0, static_cast<std::uint64_t>(i), 1);
    sum += perceive(t, 0, cfg, rng).takeoff.deviation_deg;
  }
  CHECK(std::abs(sum / kDraws - 50.0) < 0.1);
}

TEST_CASE("a 550-record dataset is schema-valid and matches its manifest") {
  SimConfig cfg;
  const auto out = run(cfg);
  const auto lines = lines_of(out.dataset);
  REQUIRE(lines.size() == 550);
  std::set<std::string> ids;
  for (const auto& line : lines) {
    const auto problems = validate_record(line);
    CHECK_MESSAGE(problems.empty(), line);
    const auto rec = parse_record(line);
    ids.insert(rec.id);
    CHECK(serialize_record(rec) == line);
    CHECK(rec.final_score.value * 100 <= 10 * static_cast<std::int64_t>(rec.dd.value) + 50);  // 10 x dd, rounded
  }
  CHECK(ids.size() == 550);
  const auto m = nlohmann::json::parse(out.manifest);
  CHECK(m.at("seed") == 7);
  CHECK(m.at("dataset").at("records") == 550);
  CHECK(m.at("dataset").at("sha256") == sha256_hex(out.dataset));
  CHECK(m.at("catalog").at("rows") == 40);
  CHECK(m.at("rules_sha256") == sha256_hex(rule_config_to_json(kCfg)));
}

TEST_CASE("config validation") {
  SimConfig cfg;
  cfg.rates.takeoff_miss_prob = 1.5;
  CHECK_THROWS(cfg.validate());
  cfg = SimConfig{};
  cfg.athlete_count = 0;
  CHECK_THROWS(cfg.validate());
}
