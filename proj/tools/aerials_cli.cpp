// Command-line front end: parse, dd, score, simulate, metrics, serve.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "aerials/catalog.hpp"
#include "aerials/jumpcode.hpp"
#include "aerials/metrics.hpp"
#include "aerials/rulebook.hpp"
#include "aerials/scoring.hpp"
#include "aerials/service/http_api.hpp"
#include "aerials/simulator.hpp"
#include "aerials/trace_io.hpp"

namespace fs = std::filesystem;
using namespace aerials;

namespace {

constexpr int kUsageExit = 2;
constexpr int kDomainExit = 1;

DifficultyCatalog open_catalog(const std::string& path) {
  return path.empty() ? DifficultyCatalog::load_default() : DifficultyCatalog::load(path);
}

RuleConfig open_rules(const std::string& path) {
  return load_rule_config(path.empty() ? default_rule_config_path() : fs::path(path));
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out.flush()) throw std::runtime_error("write failed for " + path.string());
}

std::string fixed3(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::fixed << v;
  return s.str();
}

int cmd_parse(const std::string& code_text) {
  const JumpCode code = parse_jump_code(code_text);
  std::cout << describe_jump(code) << "\n";
  std::cout << "code " << code.canonical_text << "\n";
  std::cout << "direction back\n";
  std::cout << "flips " << code.flip_count() << "\n";
  for (std::size_t i = 0; i < code.flips.size(); ++i) {
    const auto& f = code.flips[i];
    std::cout << "flip " << (i + 1) << " " << position_name(f.position);
    if (f.position == BodyPosition::Lay) std::cout << " twists " << f.twists;
    std::cout << "\n";
  }
  return 0;
}

int cmd_dd(const std::string& code, const std::string& gender, const std::string& catalog) {
  std::cout << format_dd(lookup_dd(open_catalog(catalog), code, parse_gender(gender))) << "\n";
  return 0;
}

int cmd_score(const std::string& file, const std::string& rules_path, const std::string& catalog_path,
              const std::string& trim, bool json) {
  const RuleConfig rules = open_rules(rules_path);
  const TraceFile tf = load_trace_file(file);
  if (!tf.is_panel) {
    const JudgeScore s = score_trace(tf.traces.front(), rules);
    std::cout << (json ? judge_score_to_json(s).dump(2) + "\n" : render_judge_score(s));
    return 0;
  }
  if (tf.traces.size() != kPanelSize) throw PanelSizeError(tf.traces.size());
  const auto& first = tf.traces.front();
  for (const auto& t : tf.traces)
    if (t.code_text != first.code_text || t.gender != first.gender)
      throw TraceError("all judges of a panel file must score the same code and gender");
  const auto dd = lookup_dd(open_catalog(catalog_path), first.code_text, first.gender);
  std::vector<JudgeScore> scores;
  for (const auto& t : tf.traces) scores.push_back(score_trace(t, rules));
  const PanelResult p = aggregate_panel(scores, dd, trim == "per-stage" ? TrimMode::PerStage : TrimMode::PerTotal);
  std::cout << (json ? panel_to_json(p).dump(2) + "\n" : render_panel(p));
  return 0;
}

int cmd_simulate(SimConfig cfg, const std::string& out, const std::string& rules_path,
                 const std::string& catalog_path) {
  cfg.validate();
  const fs::path dataset(out);
  const auto result =
      run_simulation(cfg, open_catalog(catalog_path), open_rules(rules_path), dataset.filename().string());
  write_file(dataset, result.dataset);
  write_file(manifest_path_for(dataset), result.manifest);
  std::cout << "wrote " << cfg.jump_count << " records to " << dataset.string() << "\n";
  std::cout << "manifest " << manifest_path_for(dataset).string() << "\n";
  return 0;
}

int cmd_metrics(const std::string& pred, const std::string& gt, std::optional<double> lo, std::optional<double> hi) {
  ScoreRange range{lo.value_or(0.0), 0.0};
  range.max = hi ? *hi : 10.0 * static_cast<double>(DifficultyCatalog::load_default().max_dd().value) / 10000.0;
  const ScoreSeries s = load_series(pred, gt, range);
  std::cout << "srcc " << fixed3(srcc(s)) << "\n";
  std::cout << "rl2 " << fixed3(rl2(s)) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Freestyle aerials judging engine"};
  app.require_subcommand(1);

  std::string code, gender = "men", catalog, rules, file, trim = "per-total", out, pred, gt, data_dir = "aerials-data",
                    host = "127.0.0.1";
  bool json = false;
  int port = 8080;
  std::optional<double> range_min, range_max;
  SimConfig sim;

  auto* parse = app.add_subcommand("parse", "Decompose a jump code and describe it");
  parse->add_option("code", code, "Jump code, e.g. bdFFdF")->required();

  auto* dd = app.add_subcommand("dd", "Look up the degree of difficulty");
  dd->add_option("code", code, "Jump code")->required();
  dd->add_option("--gender", gender, "men or women")->check(CLI::IsMember({"men", "women"}, CLI::ignore_case));
  dd->add_option("--catalog", catalog, "Catalog CSV (default: bundled table)");

  auto* score = app.add_subcommand("score", "Score a trace file or a five-judge panel file");
  score->add_option("file", file, "Trace JSON")->required()->check(CLI::ExistingFile);
  score->add_option("--rules", rules, "Rule config JSON (default: bundled)");
  score->add_option("--catalog", catalog, "Catalog CSV for panel files");
  score->add_option("--trim", trim, "per-total or per-stage")->check(CLI::IsMember({"per-total", "per-stage"}));
  score->add_flag("--json", json, "Print JSON instead of text");

  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic annotated dataset");
  simulate->add_option("--seed", sim.seed, "RNG seed");
  simulate->add_option("--jumps", sim.jump_count, "Number of jumps")->check(CLI::PositiveNumber);
  simulate->add_option("--athletes", sim.athlete_count, "Number of athletes")->check(CLI::PositiveNumber);
  simulate->add_option("--threads", sim.threads, "Worker threads (0 = hardware)");
  simulate->add_option("--out", out, "Dataset JSONL path")->required();
  simulate->add_option("--rules", rules, "Rule config JSON");
  simulate->add_option("--catalog", catalog, "Catalog CSV");

  auto* metrics = app.add_subcommand("metrics", "SRCC and R-l2 between two score files");
  metrics->add_option("--pred", pred, "Predicted scores JSONL")->required()->check(CLI::ExistingFile);
  metrics->add_option("--gt", gt, "Ground-truth scores JSONL")->required()->check(CLI::ExistingFile);
  metrics->add_option("--min", range_min, "Score range minimum (default 0)");
  metrics->add_option("--max", range_max, "Score range maximum (default 10 x largest DD)");

  auto* serve = app.add_subcommand("serve", "Run the judging service");
  serve->add_option("--port", port, "TCP port")->check(CLI::Range(1, 65535));
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--data-dir", data_dir, "Event log directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsageExit;
  }

  try {
    if (*parse) return cmd_parse(code);
    if (*dd) return cmd_dd(code, gender, catalog);
    if (*score) return cmd_score(file, rules, catalog, trim, json);
    if (*simulate) return cmd_simulate(sim, out, rules, catalog);
    if (*metrics) return cmd_metrics(pred, gt, range_min, range_max);
    if (*serve) {
      service::run_server(host, port, data_dir);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainExit;
  }
  return kUsageExit;
}
