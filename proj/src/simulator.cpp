#include "aerials/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numbers>
#include <thread>

#include "aerials/dataset.hpp"
#include "aerials/digest.hpp"
#include "aerials/trace_io.hpp"

namespace aerials {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double quantize_ms(double t) { return std::round(t * 1000.0) / 1000.0; }

double clamp_angle(double v, double hi) { return std::clamp(v, 0.0, hi); }

bool check_prob(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

std::string athlete_id(std::size_t a) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "A%02zu", a + 1);
  return buf;
}

std::string jump_id(const std::string& athlete, std::size_t k) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "-J%03zu", k + 1);
  return athlete + buf;
}

FormCategory category_for(const FlipElement& flip, RngStream& rng) {
  switch (flip.position) {
    case BodyPosition::Tuck: return rng.bernoulli(0.75) ? FormCategory::TuckPosition : FormCategory::BodyLeg;
    case BodyPosition::Pike: return rng.bernoulli(0.75) ? FormCategory::PikePosition : FormCategory::BodyLeg;
    case BodyPosition::Lay: break;
  }
  static constexpr std::array<FormCategory, 3> kLay{FormCategory::BodyLeg, FormCategory::LayoutToPike,
                                                    FormCategory::LayoutToOverarch};
  return kLay[rng.index(kLay.size())];
}

}  // namespace

void SimConfig::validate() const {
  auto fail = [](const std::string& why) { return std::invalid_argument("simulation config: " + why); };
  if (!(judge_noise_sigma_deg >= 0 && std::isfinite(judge_noise_sigma_deg))) throw fail("noise sigma must be >= 0");
  if (!check_prob(flag_flip_prob)) throw fail("flag flip probability must be in [0, 1]");
  for (double p : {rates.takeoff_miss_prob, rates.early_start_prob, rates.late_finish_prob, rates.form_break_prob,
                   rates.ski_foot_prob, rates.landing_prep_prob, rates.hand_contact_prob, rates.body_contact_prob,
                   rates.landing_flag_prob, rates.separation_miss_prob})
    if (!check_prob(p)) throw fail("error probabilities must be in [0, 1]");
  if (rates.hand_contact_prob + rates.body_contact_prob > 1.0) throw fail("contact probabilities sum above 1");
  for (double s : {rates.takeoff_sigma_deg, rates.height_distance_sigma, rates.early_start_sigma_deg,
                   rates.late_finish_sigma_deg, rates.form_sigma_deg, rates.ski_foot_sigma_deg,
                   rates.waist_bend_sigma_deg})
    if (!(s >= 0)) throw fail("error magnitudes must be >= 0");
  if (athlete_count == 0) throw fail("need at least one athlete");
}

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t athlete, std::uint64_t jump, std::uint64_t judge) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ athlete);
  h = splitmix64(h ^ jump);
  return splitmix64(h ^ judge);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t athlete, std::uint64_t jump, std::uint64_t judge)
    : engine_(stream_key(seed, athlete, jump, judge)) {}

double RngStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double RngStream::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

std::size_t RngStream::index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("RngStream::index on empty range");
  return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
}

ExecutionTrace sample_trace(const AthleteProfile& profile, const std::string& code, const ErrorRates& rates,
                            RngStream& rng) {
  const auto jump = parse_jump_code(code);
  const std::size_t flips = jump.flip_count();
  const double e = std::clamp(1.0 - profile.skill, 0.0, 1.0);

  ExecutionTrace t;
  t.code_text = jump.canonical_text;
  t.gender = profile.gender;

  // Mean clip length 7.7 s: 1.6 air + 3.0 form + 3.1 landing.
  auto& b = t.boundaries;
  b.t0 = 0.0;
  b.t1 = quantize_ms(b.t0 + rng.uniform(1.4, 1.8));
  b.t2 = quantize_ms(b.t1 + rng.uniform(2.7, 3.3));
  b.t3 = quantize_ms(b.t2 + rng.uniform(2.8, 3.4));

  const double slot = (b.t2 - b.t1) / static_cast<double>(flips);
  double start = b.t1;
  for (std::size_t k = 0; k < flips; ++k) {
    double end = b.t2;
    if (k + 1 < flips) end = quantize_ms(b.t1 + slot * static_cast<double>(k + 1) + rng.uniform(-0.1, 0.1) * slot);
    t.sub_actions.push_back({start, end});
    start = end;
  }

  t.takeoff.posture = static_cast<TakeoffPosture>(rng.index(3));
  t.takeoff.deviation_deg = clamp_angle(rng.half_normal(rates.takeoff_sigma_deg * e), 180.0);
  t.takeoff.missed = rng.bernoulli(rates.takeoff_miss_prob * e);
  t.takeoff.instrument_hd =
      std::clamp(std::round((1.0 - rng.half_normal(rates.height_distance_sigma * e)) * 100.0) / 100.0, 0.0, 1.0);

  for (std::size_t k = 0; k < flips; ++k) {
    const int flip_no = static_cast<int>(k + 1);
    if (rng.bernoulli(rates.early_start_prob * e))
      t.timing_events.push_back(
          {flip_no, TimingKind::EarlyStart, clamp_angle(rng.half_normal(rates.early_start_sigma_deg * e), 360.0)});
    if (flips >= 2 && jump.flips[k].twists > 0 && rng.bernoulli(rates.late_finish_prob * e))
      t.timing_events.push_back(
          {flip_no, TimingKind::LateFinish, clamp_angle(rng.half_normal(rates.late_finish_sigma_deg * e), 360.0)});
  }

  for (std::size_t k = 0; k < flips; ++k) {
    if (!rng.bernoulli(rates.form_break_prob * e)) continue;
    FormDeviation d;
    d.category = category_for(jump.flips[k], rng);
    d.angle_deg = clamp_angle(rng.half_normal(rates.form_sigma_deg * e), 180.0);
    d.timestamp_s = quantize_ms(rng.uniform(t.sub_actions[k].start, t.sub_actions[k].end));
    t.form_deviations.push_back(d);
  }
  if (rng.bernoulli(rates.ski_foot_prob * e)) {
    FormDeviation d;
    d.category = rng.bernoulli(0.5) ? FormCategory::Ski : FormCategory::Foot;
    d.angle_deg = clamp_angle(rng.half_normal(rates.ski_foot_sigma_deg * e), 180.0);
    d.timestamp_s = quantize_ms(rng.uniform(b.t1, b.t2));
    t.form_deviations.push_back(d);
  }
  if (rng.bernoulli(rates.landing_prep_prob * e)) {
    const auto& last = t.sub_actions.back();
    FormDeviation d;
    d.category = FormCategory::LayoutToPike;
    d.in_landing_prep = true;
    d.waist_bend_deg = clamp_angle(rng.half_normal(rates.waist_bend_sigma_deg * e), 180.0);
    d.angle_deg = d.waist_bend_deg;
    d.timestamp_s = quantize_ms(rng.uniform(last.midpoint(), last.end));
    t.form_deviations.push_back(d);
  }
  std::stable_sort(t.form_deviations.begin(), t.form_deviations.end(),
                   [](const FormDeviation& a, const FormDeviation& c) { return a.timestamp_s < c.timestamp_s; });

  const double u = rng.uniform();
  if (u < rates.body_contact_prob * e)
    t.landing.contact = LandingContact::Body;
  else if (u < (rates.body_contact_prob + rates.hand_contact_prob) * e)
    t.landing.contact = LandingContact::Hand;
  for (std::size_t f = 0; f < kLandingFlagCount; ++f)
    if (rng.bernoulli(rates.landing_flag_prob * e)) t.landing.flags.insert(static_cast<LandingFlag>(f));

  t.separation_shown = !rng.bernoulli(rates.separation_miss_prob * e);
  return t;
}

ExecutionTrace perceive(const ExecutionTrace& trace, std::size_t /*judge_index*/, const SimConfig& cfg,
                        RngStream& rng) {
  const double sigma = cfg.judge_noise_sigma_deg;
  auto jitter = [&](double v, double hi) { return sigma > 0 ? clamp_angle(v + sigma * rng.normal(), hi) : v; };
  ExecutionTrace p = trace;
  p.takeoff.deviation_deg = jitter(p.takeoff.deviation_deg, 180.0);
  for (auto& ev : p.timing_events) ev.degrees_offset = jitter(ev.degrees_offset, 360.0);
  for (auto& d : p.form_deviations) {
    d.angle_deg = jitter(d.angle_deg, 180.0);
    if (d.in_landing_prep) d.waist_bend_deg = jitter(d.waist_bend_deg, 180.0);
  }
  for (std::size_t f = 0; f < kLandingFlagCount; ++f) {
    if (!rng.bernoulli(cfg.flag_flip_prob)) continue;
    const auto flag = static_cast<LandingFlag>(f);
    if (!p.landing.flags.erase(flag)) p.landing.flags.insert(flag);
  }
  if (rng.bernoulli(cfg.flag_flip_prob)) p.separation_shown = !p.separation_shown;
  return p;
}

std::vector<AthleteProfile> generate_profiles(const SimConfig& cfg, const DifficultyCatalog& catalog) {
  std::vector<const DifficultyEntry*> all, multi;
  for (const auto& e : catalog.entries()) {
    all.push_back(&e);
    if (parse_jump_code(e.code).flip_count() >= 2) multi.push_back(&e);
  }
  if (all.empty()) throw std::invalid_argument("catalog is empty");
  if (multi.empty()) multi = all;

  std::vector<AthleteProfile> out;
  for (std::size_t a = 0; a < cfg.athlete_count; ++a) {
    RngStream rng(cfg.seed, a, RngStream::kProfileJump, RngStream::kTraceSlot);
    AthleteProfile p;
    p.id = athlete_id(a);
    p.gender = a % 2 == 0 ? Gender::Men : Gender::Women;
    p.skill = std::round(rng.uniform(0.35, 0.95) * 100.0) / 100.0;
    const auto& pool = p.skill >= 0.6 ? multi : all;
    while (p.repertoire.size() < std::min<std::size_t>(3, pool.size())) {
      const auto& code = pool[rng.index(pool.size())]->code;
      if (std::find(p.repertoire.begin(), p.repertoire.end(), code) == p.repertoire.end()) p.repertoire.push_back(code);
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<AnnotatedJump> simulate_competition(const SimConfig& cfg, const std::vector<AthleteProfile>& profiles,
                                                const DifficultyCatalog& catalog, const RuleConfig& rules) {
  cfg.validate();
  rules.validate();
  if (profiles.empty()) throw std::invalid_argument("no athletes to simulate");
  for (const auto& p : profiles) {
    if (p.repertoire.empty()) throw std::invalid_argument("athlete " + p.id + " has an empty repertoire");
    for (const auto& c : p.repertoire)
      if (!catalog.find(parse_jump_code(c).canonical_text)) throw UnknownCodeError(c);
  }

  // Jump j belongs to athlete j % n as that athlete's (j / n)-th jump; output
  // is ordered by (athlete, jump index).
  const std::size_t n = profiles.size();
  std::vector<std::pair<std::size_t, std::size_t>> order;
  for (std::size_t j = 0; j < cfg.jump_count; ++j) order.emplace_back(j % n, j / n);
  std::sort(order.begin(), order.end());

  std::vector<AnnotatedJump> out(order.size());
  auto simulate_one = [&](std::size_t slot) {
    const auto [a, k] = order[slot];
    const auto& profile = profiles[a];
    RngStream rng(cfg.seed, a, k, RngStream::kTraceSlot);
    const auto& code = profile.repertoire[rng.index(profile.repertoire.size())];
    AnnotatedJump& jump = out[slot];
    jump.trace = sample_trace(profile, code, cfg.rates, rng);
    jump.id = jump_id(profile.id, k);
    jump.athlete = profile.id;
    jump.gender = profile.gender;
    jump.code = jump.trace.code_text;
    jump.dd = lookup_dd(catalog, jump.code, profile.gender);
    std::array<JudgeScore, kPanelSize> scores;
    for (std::size_t judge = 0; judge < kPanelSize; ++judge) {
      RngStream judge_rng(cfg.seed, a, k, judge + 1);
      scores[judge] = score_trace(perceive(jump.trace, judge, cfg, judge_rng), rules);
    }
    jump.panel = aggregate_panel(scores, jump.dd);
    jump.deductions = merge_kept_deductions(jump.panel);
  };

  const unsigned hw = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(hw, std::max<std::size_t>(1, out.size() / 32)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < out.size(); ++i) simulate_one(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < out.size(); i += workers) simulate_one(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

SimulationOutput run_simulation(const SimConfig& cfg, const DifficultyCatalog& catalog, const RuleConfig& rules,
                                const std::string& dataset_name) {
  const auto profiles = generate_profiles(cfg, catalog);
  const auto jumps = simulate_competition(cfg, profiles, catalog, rules);
  SimulationOutput o;
  for (const auto& j : jumps) {
    o.dataset += emit_annotation(j);
    o.dataset += '\n';
  }

  ordered_json athletes = ordered_json::array();
  for (const auto& p : profiles) {
    athletes.push_back({{"id", p.id}, {"gender", gender_name(p.gender)}, {"skill", p.skill}, {"repertoire", p.repertoire}});
  }
  const auto& r = cfg.rates;
  ordered_json manifest = {
      {"schema", "aerials.manifest/1"},
      {"seed", cfg.seed},
      {"config",
       {{"jump_count", cfg.jump_count},
        {"athlete_count", cfg.athlete_count},
        {"judge_noise_sigma_deg", cfg.judge_noise_sigma_deg},
        {"flag_flip_prob", cfg.flag_flip_prob},
        {"error_rates",
         {{"takeoff_sigma_deg", r.takeoff_sigma_deg},
          {"takeoff_miss_prob", r.takeoff_miss_prob},
          {"height_distance_sigma", r.height_distance_sigma},
          {"early_start_prob", r.early_start_prob},
          {"early_start_sigma_deg", r.early_start_sigma_deg},
          {"late_finish_prob", r.late_finish_prob},
          {"late_finish_sigma_deg", r.late_finish_sigma_deg},
          {"form_break_prob", r.form_break_prob},
          {"form_sigma_deg", r.form_sigma_deg},
          {"ski_foot_prob", r.ski_foot_prob},
          {"ski_foot_sigma_deg", r.ski_foot_sigma_deg},
          {"landing_prep_prob", r.landing_prep_prob},
          {"waist_bend_sigma_deg", r.waist_bend_sigma_deg},
          {"hand_contact_prob", r.hand_contact_prob},
          {"body_contact_prob", r.body_contact_prob},
          {"landing_flag_prob", r.landing_flag_prob},
          {"separation_miss_prob", r.separation_miss_prob}}},
        {"landing_hill",
         {{"length_m", cfg.hill.length_m},
          {"slope_deg", cfg.hill.slope_deg},
          {"slope_tolerance_deg", cfg.hill.slope_tolerance_deg}}}}},
      {"catalog", {{"version", catalog.version()}, {"rows", catalog.size()}, {"sha256", sha256_hex(catalog.to_csv())}}},
      {"rules_sha256", sha256_hex(rule_config_to_json(rules))},
      {"athletes", athletes},
      {"dataset", {{"file", dataset_name}, {"records", jumps.size()}, {"sha256", sha256_hex(o.dataset)}}}};
  o.manifest = manifest.dump(2) + "\n";
  return o;
}

std::filesystem::path manifest_path_for(const std::filesystem::path& dataset_path) {
  auto p = dataset_path;
  p.replace_extension(".manifest.json");
  return p;
}

}  // namespace aerials
