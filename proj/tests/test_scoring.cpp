#include <doctest.h>

#include <random>

#include "aerials/dataset.hpp"
#include "aerials/scoring.hpp"
#include "aerials/trace_io.hpp"
#include "test_support.hpp"

using namespace aerials;
using aerials::testing::make_trace;
using aerials::testing::score_with_total;

namespace {

const RuleConfig kCfg = RuleConfig::defaults();

DegreeOfDifficulty dd(const char* text) { return DegreeOfDifficulty(static_cast<int>(parse_fixed(text, 4))); }

std::vector<JudgeScore> panel_of(std::array<int, 5> totals) {
  std::vector<JudgeScore> v;
  for (int t : totals) v.push_back(score_with_total(t));
  return v;
}

}  // namespace

TEST_CASE("air stage") {
  auto t = make_trace("bFF");
  CHECK(score_air(t, kCfg).score == Tenths{20});
  CHECK(score_air(t, kCfg).deductions.empty());

  t.takeoff = {TakeoffPosture::BodyLeg, 20, false, 1.0};
  const auto air = score_air(t, kCfg);
  CHECK(air.score == Tenths{19});
  REQUIRE(air.deductions.size() == 1);
  CHECK(air.deductions[0].item == "Take-Off Body Leg");
  CHECK(air.deductions[0].points == Tenths{1});
  CHECK(air.deductions[0].severity == Severity::Minor);

  t.takeoff = {TakeoffPosture::BodyArch, 0, true, 0.5};
  const auto missed = score_air(t, kCfg);
  CHECK(missed.score == Tenths{5});
  CHECK(missed.deductions.at(0).item == "Missed Take-Off");
  CHECK(missed.deductions.at(0).severity == Severity::Absolute);
}

TEST_CASE("form stage") {
  auto t = make_trace("bFF");
  CHECK(score_form(t, kCfg).score == Tenths{50});

  t.form_deviations.push_back({FormCategory::BodyLeg, 50, 2.0, false, 0});
  CHECK(score_form(t, kCfg).score == Tenths{46});

  t = make_trace("bFF");
  t.timing_events.push_back({1, TimingKind::LateFinish, 27});
  t.form_deviations.push_back({FormCategory::Ski, 90, 3.0, false, 0});
  const auto r = score_form(t, kCfg);
  CHECK(r.score == Tenths{39});
  REQUIRE(r.deductions.size() == 2);
  CHECK(r.deductions[0].item == "Ski Alignment Air");
  CHECK(r.deductions[1].item == "Late Twist Finish");
  CHECK(r.deductions[1].timestamp_s == doctest::Approx(3.1));  // end of flip 1

  t = make_trace("bFF");
  t.form_deviations.push_back({FormCategory::BodyLeg, 0, 4.0, true, 60});
  CHECK(score_form(t, kCfg).deductions.at(0).item == "Landing Prep Waist Bend");
  CHECK(score_form(t, kCfg).score == Tenths{48});

  t = make_trace("bT");
  t.timing_events.push_back({1, TimingKind::LateFinish, 10});
  CHECK_THROWS_AS(score_trace(t, kCfg), RuleError);
}

TEST_CASE("landing stage") {
  auto t = make_trace("bT");
  CHECK(score_landing(t, kCfg).score == Tenths{30});
  t.landing.contact = LandingContact::Hand;
  const auto hand = score_landing(t, kCfg);
  CHECK(hand.score == Tenths{20});
  CHECK(hand.deductions.at(0).item == "Hand Contact");
  CHECK(hand.deductions.at(0).points == Tenths{10});
  t.landing = {LandingContact::Body, {LandingFlag::Backward}};
  const auto body = score_landing(t, kCfg);
  CHECK(body.score == Tenths{15});
  Tenths sum;
  for (const auto& d : body.deductions) sum += d.points;
  CHECK(Tenths{30} - sum == body.score);
}

TEST_CASE("whole trace") {
  CHECK(score_trace(make_trace("bdFFdF"), kCfg).total == Tenths{100});

  auto t = make_trace("bdFFdF");
  t.takeoff.deviation_deg = 20;
  CHECK(score_trace(t, kCfg).total == Tenths{99});

  t.takeoff = {TakeoffPosture::BodyPike, 180, true, 0.0};
  for (int f = 1; f <= 3; ++f) {
    t.timing_events.push_back({f, TimingKind::EarlyStart, 180});
    t.timing_events.push_back({f, TimingKind::LateFinish, 180});
  }
  for (int i = 0; i < 6; ++i) t.form_deviations.push_back({FormCategory::BodyLeg, 180, 2.0 + 0.3 * i, false, 0});
  t.landing = {LandingContact::Body, {LandingFlag::SevereImbalance, LandingFlag::Sideways, LandingFlag::Circling,
                                      LandingFlag::Backward}};
  const auto worst = score_trace(t, kCfg);
  CHECK(worst.air == Tenths{0});
  CHECK(worst.form == Tenths{0});
  // The default flag table sums to 2.7, so the landing floor needs heavier flags.
  CHECK(worst.landing == Tenths{3});
  RuleConfig heavy = kCfg;
  heavy.landing_flag_penalty[3] = Tenths{15};
  CHECK(score_trace(t, heavy).total == Tenths{0});
  CHECK(std::is_sorted(worst.deductions.begin(), worst.deductions.end(), [](const auto& a, const auto& b) {
    return std::tie(a.timestamp_s, a.item) < std::tie(b.timestamp_s, b.item);
  }));
}

TEST_CASE("trace validation") {
  auto t = make_trace("bFF");
  t.sub_actions.pop_back();
  CHECK_THROWS_AS(validate_trace(t), TraceError);
  t = make_trace("bFF");
  t.boundaries.t2 = t.boundaries.t1;
  CHECK_THROWS_AS(validate_trace(t), TraceError);
  t = make_trace("bFF");
  t.form_deviations.push_back({FormCategory::Ski, 10, 6.0, false, 0});
  CHECK_THROWS_AS(validate_trace(t), TraceError);
  t = make_trace("bFF");
  t.timing_events.push_back({3, TimingKind::EarlyStart, 10});
  CHECK_THROWS_AS(validate_trace(t), TraceError);
}

TEST_CASE("bounds over random traces") {
  const auto catalog = DifficultyCatalog::load_default();
  std::mt19937_64 rng(99);
  for (int i = 0; i < 2000; ++i) {
    const auto s = score_trace(aerials::testing::random_trace(rng, catalog), kCfg);
    REQUIRE(s.air >= Tenths{0});
    REQUIRE(s.air <= Tenths{20});
    REQUIRE(s.form >= Tenths{0});
    REQUIRE(s.form <= Tenths{50});
    REQUIRE(s.landing >= Tenths{0});
    REQUIRE(s.landing <= Tenths{30});
    REQUIRE(s.total == s.air + s.form + s.landing);
  }
}

TEST_CASE("panel examples") {
  const auto flat = aggregate_panel(panel_of({80, 80, 80, 80, 80}), dd("2.3000"));
  CHECK(format_hundredths(flat.final_score) == "18.40");

  const auto spread = aggregate_panel(panel_of({90, 85, 80, 75, 70}), dd("3.0000"));
  CHECK(spread.pre_dd_mean_text() == "8.0000");
  CHECK(format_hundredths(spread.final_score) == "24.00");
  CHECK(spread.kept_indices == std::array<std::size_t, 3>{1, 2, 3});

  const auto ties = aggregate_panel(panel_of({90, 90, 80, 70, 60}), dd("2.0000"));
  CHECK(ties.kept_indices == std::array<std::size_t, 3>{1, 2, 3});
  CHECK(ties.kept_total_sum == 240);

  CHECK_THROWS_AS(aggregate_panel(std::vector<JudgeScore>(4), dd("2.0000")), PanelSizeError);
}

TEST_CASE("trimmed mean matches sort-and-drop-ends") {
  const int dds[] = {20000, 31500, 53000, 61215};
  std::array<int, 5> t{};
  for (t[0] = 0; t[0] <= 100; t[0] += 10)
    for (t[1] = 0; t[1] <= 100; t[1] += 10)
      for (t[2] = 0; t[2] <= 100; t[2] += 10)
        for (t[3] = 0; t[3] <= 100; t[3] += 10)
          for (t[4] = 0; t[4] <= 100; t[4] += 10) {
            const int d = dds[(t[0] + t[4]) / 10 % 4];
            const auto p = aggregate_panel(panel_of(t), DegreeOfDifficulty(d));
            const auto sum = aerials::testing::brute_force_kept_sum(t);
            REQUIRE(p.kept_total_sum == sum);
            REQUIRE(p.final_score.value == aerials::testing::brute_force_final(sum, d));
          }
}

TEST_CASE("panel properties") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    std::array<int, 5> t{};
    for (auto& v : t) v = static_cast<int>(rng() % 101);
    const auto p = aggregate_panel(panel_of(t), dd("3.0000"));
    // Stage sub-scores come from the same kept judges.
    CHECK(p.stage_sums[0] + p.stage_sums[1] + p.stage_sums[2] == p.kept_total_sum);
    // Shifting every total by the same amount shifts the kept sum by three times that.
    const int shift = static_cast<int>(rng() % 20) - 10;
    std::array<int, 5> moved = t;
    for (auto& v : moved) v += shift;
    const auto q = aggregate_panel(panel_of(moved), dd("3.0000"));
    CHECK(q.kept_indices == p.kept_indices);
    CHECK(q.kept_total_sum == p.kept_total_sum + 3 * shift);
    // Reversing the order of distinct scores keeps the same multiset.
    std::array<int, 5> rev = t;
    std::reverse(rev.begin(), rev.end());
    CHECK(aggregate_panel(panel_of(rev), dd("3.0000")).kept_total_sum == p.kept_total_sum);
  }
}

TEST_CASE("per-stage trimming") {
  std::vector<JudgeScore> v(5);
  const int air[] = {20, 10, 15, 12, 18}, form[] = {50, 40, 45, 30, 20}, land[] = {30, 10, 20, 25, 15};
  for (int i = 0; i < 5; ++i) {
    v[i].air = Tenths{air[i]};
    v[i].form = Tenths{form[i]};
    v[i].landing = Tenths{land[i]};
    v[i].total = v[i].air + v[i].form + v[i].landing;
  }
  const auto p = aggregate_panel(v, dd("2.0000"), TrimMode::PerStage);
  CHECK(p.stage_sums[0] == 15 + 12 + 18);
  CHECK(p.stage_sums[1] == 40 + 45 + 30);
  CHECK(p.stage_sums[2] == 20 + 25 + 15);
  CHECK(p.kept_total_sum == 45 + 115 + 60);
  CHECK(p.stage_subscore(Stage::Air) == Tenths{15});
}

TEST_CASE("kept deductions are merged without duplicates") {
  auto t = make_trace("bFF");
  t.form_deviations.push_back({FormCategory::BodyLeg, 50, 2.0, false, 0});
  std::vector<JudgeScore> v;
  for (int i = 0; i < 5; ++i) v.push_back(score_trace(t, kCfg));
  const auto merged = merge_kept_deductions(aggregate_panel(v, dd("3.1500")));
  CHECK(merged.size() == 1);
}

TEST_CASE("trace JSON round trip") {
  const auto catalog = DifficultyCatalog::load_default();
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto t = aerials::testing::random_trace(rng, catalog);
    const auto back = trace_from_json(trace_to_json(t));
    CHECK(score_trace(back, kCfg) == score_trace(t, kCfg));
    CHECK(trace_to_json(back).dump() == trace_to_json(t).dump());
  }
  CHECK_THROWS(parse_trace_file("{\"schema\": \"aerials.trace/9\"}"));
}

TEST_CASE("dataset record") {
  AnnotatedJump j;
  j.id = "A01-J001";
  j.athlete = "A01";
  j.code = "bT";
  j.dd = dd("2.0000");
  j.trace = make_trace("bT");
  std::vector<JudgeScore> v(5, score_trace(j.trace, kCfg));
  j.panel = aggregate_panel(v, j.dd);
  j.deductions = merge_kept_deductions(j.panel);
  const auto line = emit_annotation(j);
  const auto rec = parse_record(line);
  CHECK(format_hundredths(rec.final_score) == "20.00");
  CHECK(rec.deductions.empty());
  CHECK(serialize_record(rec) == line);
  CHECK(validate_record(line).empty());
  CHECK_FALSE(validate_record("{}").empty());
  std::string broken = line;
  broken.replace(broken.find("\"2.0000\""), 8, "\"2.00\"");
  CHECK_FALSE(validate_record(broken).empty());
}
