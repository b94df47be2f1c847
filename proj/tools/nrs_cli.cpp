// Copyright 2026 The NRS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Command-line front end: datagen, train, calibrate, evaluate, solve, report.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nrs/datagen/dataset.hpp"
#include "nrs/eval/calibrate.hpp"
#include "nrs/eval/evaluate.hpp"
#include "nrs/eval/report.hpp"
#include "nrs/pipeline/neural.hpp"
#include "nrs/pipeline/stubs.hpp"
#include "nrs/train/trainer.hpp"

namespace fs = std::filesystem;
using namespace nrs;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  std::string config;
  std::string out;
};

std::optional<Domain> parse_scope(const std::string& s) {
  if (s == "multi") return std::nullopt;
  return parse_domain(s);
}

std::vector<DatasetRecord> load_split(const fs::path& data, const std::string& name, std::optional<Domain> domain) {
  auto records = read_jsonl(data / (name + ".jsonl"));
  if (!domain) return records;
  std::vector<DatasetRecord> out;
  for (auto& r : records) {
    if (r.domain == *domain) out.push_back(std::move(r));
  }
  return out;
}

// A checkpoint directory, or a training output holding selected.txt.
fs::path resolve_checkpoint(const fs::path& p) {
  if (fs::exists(p / "manifest.txt")) return p;
  std::ifstream sel(p / "selected.txt");
  std::string line;
  if (sel && std::getline(sel, line)) return fs::path(line);
  throw std::runtime_error("no checkpoint at " + p.string());
}

// Modules for one engine; "oracle" selects the symbolic stubs.
struct Modules {
  std::unique_ptr<LeafSampler> sampler;
  std::unique_ptr<Segmenter> segmenter;
  std::unique_ptr<Solver> solver;
  std::optional<LoadedSeq2Seq> selector_s2s;
  std::optional<LoadedSegmenter> selector_seg;
  std::optional<LoadedSeq2Seq> solver_model;
  Manifest info;
};

Modules build_modules(EngineKind engine, const std::string& selector, const std::string& solver) {
  Modules m;
  m.info.set("selector", selector);
  m.info.set("solver", solver);
  if (engine == EngineKind::nrs) {
    if (selector == "oracle") {
      m.sampler = std::make_unique<OracleSampler>();
    } else {
      m.selector_s2s = load_seq2seq(resolve_checkpoint(selector));
      m.sampler = std::make_unique<NeuralLeafSampler>(*m.selector_s2s->model, m.selector_s2s->vocab);
    }
  } else {
    if (selector == "oracle") {
      m.segmenter = std::make_unique<OracleSegmenter>();
    } else {
      m.selector_seg = load_segmenter(resolve_checkpoint(selector));
      m.segmenter = std::make_unique<NeuralSegmenter>(*m.selector_seg->model, m.selector_seg->vocab);
    }
  }
  if (solver == "oracle") {
    m.solver = std::make_unique<OracleSolver>();
  } else {
    m.solver_model = load_seq2seq(resolve_checkpoint(solver));
    m.solver = std::make_unique<NeuralSolver>(*m.solver_model->model, m.solver_model->vocab);
  }
  return m;
}

// Threshold overrides: nrs.M, nrs.T.<domain> (an integer or "off"),
// fastnrs.theta.<domain>.
std::unique_ptr<Engine> build_engine(EngineKind engine, Modules& mods, const Manifest& cfg) {
  if (engine == EngineKind::nrs) {
    std::map<Domain, SelectorConfig> configs;
    for (Domain d : kAllDomains) {
      SelectorConfig c = SelectorConfig::defaults(d, static_cast<int>(cfg.get_int_or("nrs.M", 10)));
      const std::string key = "nrs.T." + std::string(domain_name(d));
      if (auto v = cfg.find(key)) c.T = *v == "off" ? std::nullopt : std::optional<int>(std::stoi(*v));
      configs[d] = c;
      mods.info.set("nrs.M", c.M);
      mods.info.set(key, c.T ? std::to_string(*c.T) : "off");
    }
    return std::make_unique<NrsEngine>(*mods.sampler, *mods.solver, configs);
  }
  std::map<Domain, ReplacementPolicy> policies;
  for (Domain d : kAllDomains) {
    const std::string key = "fastnrs.theta." + std::string(domain_name(d));
    policies[d] = ReplacementPolicy{cfg.get_double_or(key, ReplacementPolicy::default_threshold(d))};
    mods.info.set(key, policies[d].theta);
  }
  return std::make_unique<FastNrsEngine>(*mods.segmenter, *mods.solver, policies);
}

Manifest optional_manifest(const std::string& path) { return path.empty() ? Manifest{} : Manifest::read(path); }

fs::path require_out(const Globals& g) {
  if (g.out.empty()) throw std::runtime_error("--out is required");
  return fs::path(g.out);
}

int run_datagen(const Globals& g, const std::string& scope, bool full) {
  std::vector<Domain> domains;
  const bool multi = scope == "multi";
  if (scope == "all" || multi) {
    domains.assign(kAllDomains.begin(), kAllDomains.end());
  } else {
    domains.push_back(parse_domain(scope));
  }
  const SplitSpec full_spec;
  DatagenOutput out = generate_datasets(domains, g.seed, multi, full ? &full_spec : nullptr);
  write_datasets(out, require_out(g));
  for (const auto& [name, records] : out.files) std::cout << name << ": " << records.size() << "\n";
  return 0;
}

int run_train(const Globals& g, const std::string& module, const std::string& engine, const std::string& scope,
              const std::string& data, int iterations) {
  TrainConfig cfg = g.config.empty() ? TrainConfig::defaults(parse_module(module), parse_engine(engine), parse_scope(scope))
                                     : TrainConfig::read(g.config);
  if (!g.config.empty()) {
    // Command-line module/engine/domain must agree with the file.
    // The Solver is shared by both engines.
    const bool engine_ok = cfg.module == ModuleKind::solver || cfg.engine == parse_engine(engine);
    if (cfg.module != parse_module(module) || !engine_ok || cfg.scope() != scope) {
      throw std::runtime_error("config file is for " + std::string(module_name(cfg.module)) + "/" +
                               std::string(engine_name(cfg.engine)) + "/" + cfg.scope());
    }
  }
  cfg.seed = g.seed;
  if (iterations > 0) {
    cfg.iterations = iterations;
    cfg.warmup = std::min(cfg.warmup, iterations / 5);
  }
  const fs::path dir(data);
  TrainData td;
  const std::optional<Domain> domain = cfg.domain;
  if (cfg.module == ModuleKind::solver) {
    td.train = load_split(dir, "solver.train", domain);
    td.id_val = load_split(dir, "solver.id_val", domain);
  } else {
    const std::string prefix = cfg.engine == EngineKind::fastnrs ? "selector_segmentation" : "selector_seq2seq";
    td.train = load_split(dir, prefix + ".train", domain);
    td.id_val = load_split(dir, prefix + ".id_val", domain);
    td.ood_val = load_split(dir, prefix + ".ood_val", domain);
    td.exclude = load_split(dir, "test", domain);
  }
  const fs::path out = require_out(g);
  fs::create_directories(out);
  cfg.write(out / "config.txt");
  TrainResult r = train_module(cfg, td, out, [](const LogRow& row) {
    std::cout << "iter " << row.iteration << " loss " << row.loss << " id " << row.id_metric << " ood "
              << row.ood_metric << std::endl;
  });
  if (r.diverged) std::cout << "loss diverged; kept checkpoints up to the last finite step\n";
  if (!r.checkpoints.empty()) {
    const Checkpoint& best = select_model_on_ood(r.checkpoints);
    std::ofstream(out / "selected.txt") << fs::absolute(best.dir).string() << "\n";
    std::cout << "selected " << best.dir.string() << " (ood " << best.ood_metric << ")\n";
  }
  std::cout << "seconds " << r.seconds << "\n";
  return 0;
}

int run_calibrate(const Globals& g, const std::string& kind, const std::string& checkpoint, const std::string& data,
                  const std::string& scope, double quantile, int bin_width, bool shipped) {
  const fs::path out = require_out(g);
  fs::create_directories(out);
  const std::optional<Domain> domain = parse_scope(scope);
  Manifest summary;
  summary.set("kind", kind);
  summary.set("checkpoint", checkpoint);
  if (kind == "windowing") {
    LoadedSeq2Seq sel = load_seq2seq(resolve_checkpoint(checkpoint));
    NeuralLeafSampler sampler(*sel.model, sel.vocab);
    std::vector<Formula> inputs;
    for (const auto& name : {"selector_seq2seq.id_val", "selector_seq2seq.ood_val"}) {
      for (const auto& r : load_split(data, name, domain)) inputs.push_back(parse(r.input, r.domain));
    }
    WindowingOptions opt;
    opt.bin_width = static_cast<std::size_t>(bin_width);
    const auto c = calibrate_windowing_threshold(selector_confidences(sampler, inputs, g.seed), opt);
    std::ofstream(out / "confidence_by_length.csv") << windowing_csv(c);
    summary.set("threshold", c.threshold ? std::to_string(*c.threshold) : "off");
    std::cout << "proposed T: " << (c.threshold ? std::to_string(*c.threshold) : "off (no knee)") << "\n";
  } else if (kind == "solver") {
    if (!domain) throw std::runtime_error("solver calibration needs a single --domain");
    LoadedSeq2Seq sol = load_seq2seq(resolve_checkpoint(checkpoint));
    NeuralSolver solver(*sol.model, sol.vocab);
    std::vector<Formula> leaves;
    for (const auto& r : load_split(data, "solver.train", domain)) leaves.push_back(parse(r.input, r.domain));
    const auto c = calibrate_solver_threshold(solver_log_confidences(solver, leaves), *domain,
                                              SolverCalibrationOptions{quantile, 40, shipped});
    std::ofstream(out / "solver_confidence_histogram.csv") << solver_histogram_csv(c);
    summary.set("theta", c.theta);
    summary.set("quantile", quantile);
    std::cout << "proposed theta: " << c.theta << "\n";
  } else {
    throw std::runtime_error("unknown calibration kind: " + kind);
  }
  summary.write(out / "calibration.txt");
  return 0;
}

int run_evaluate(const Globals& g, const std::string& engine, const std::string& selector, const std::string& solver,
                 const std::string& data, const std::string& scope, int limit) {
  const EngineKind kind = parse_engine(engine);
  Modules mods = build_modules(kind, selector, solver);
  auto eng = build_engine(kind, mods, optional_manifest(g.config));
  fs::path test(data);
  if (fs::is_directory(test)) test /= "test.jsonl";
  std::vector<DatasetRecord> records = read_jsonl(test);
  if (scope != "all") {
    const Domain d = parse_domain(scope);
    std::erase_if(records, [&](const DatasetRecord& r) { return r.domain != d; });
  }
  if (limit > 0 && records.size() > static_cast<std::size_t>(limit)) records.resize(static_cast<std::size_t>(limit));
  for (const auto* loaded : {mods.selector_s2s ? &mods.selector_s2s->manifest : nullptr,
                             mods.selector_seg ? &mods.selector_seg->manifest : nullptr}) {
    if (!loaded) continue;
    for (const auto& r : records) {
      const std::string& scope_name = loaded->get("domain");
      if (scope_name != "multi" && scope_name != domain_name(r.domain)) {
        throw std::runtime_error("selector checkpoint is for " + scope_name + " but the test set has " +
                                 std::string(domain_name(r.domain)));
      }
    }
  }
  const Evaluation ev = evaluate(*eng, records, g.seed);
  Manifest info = mods.info;
  info.set("test_set", test.string());
  write_report(ev, require_out(g), info);
  std::cout << accuracy_csv(ev.metrics);
  std::cout << "aggregate accuracy " << ev.metrics.aggregate().accuracy() << "\n";
  return 0;
}

int run_solve(const Globals& g, const std::string& engine, const std::string& selector, const std::string& solver,
              const std::string& scope, const std::string& formula) {
  const EngineKind kind = parse_engine(engine);
  Modules mods = build_modules(kind, selector, solver);
  auto eng = build_engine(kind, mods, optional_manifest(g.config));
  const RunResult r = eng->run(parse(formula, parse_domain(scope)), g.seed);
  for (const auto& s : r.trace.steps) std::cout << s.index << ": " << s.input << " -> " << s.output << "\n";
  std::cout << "status " << run_status_name(r.trace.status) << "\n";
  std::cout << "result " << (r.value ? r.value->render() : "(none)") << "\n";
  if (!g.out.empty()) std::ofstream(g.out) << trace_to_json(r.trace) << "\n";
  return 0;
}

int run_report(const Globals& g, const std::string& traces) {
  auto records = read_traces(traces);
  const std::string engine = records.empty() ? "" : records.front().trace.engine;
  const Evaluation ev = reclassify(engine, g.seed, std::move(records));
  Manifest info;
  info.set("traces", traces);
  write_report(ev, require_out(g), info);
  std::cout << errors_csv(ev.metrics);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neural rewriting systems: data generation, training and evaluation"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--config", g.config, "Key-value config file");
  app.add_option("--out", g.out, "Output path");

  std::string scope = "logic";
  bool full = false;
  auto* datagen = app.add_subcommand("datagen", "Generate datasets");
  datagen->add_option("--domain", scope, "logic|listops|arithmetic|algebra|all|multi")->capture_default_str();
  datagen->add_flag("--full", full, "Use full Solver split sizes instead of the desk sizes");

  std::string module = "selector";
  std::string engine = "fastnrs";
  std::string data;
  int iterations = 0;
  auto* train = app.add_subcommand("train", "Train a Selector or Solver");
  train->add_option("--module", module, "selector|solver")->capture_default_str();
  train->add_option("--engine", engine, "nrs|fastnrs")->capture_default_str();
  train->add_option("--domain", scope, "Domain or multi")->capture_default_str();
  train->add_option("--data", data, "Dataset directory")->required();
  train->add_option("--iterations", iterations, "Override the iteration budget");

  std::string kind = "solver";
  std::string checkpoint;
  double quantile = 0.001;
  int bin_width = 10;
  bool shipped = false;
  auto* calibrate = app.add_subcommand("calibrate", "Propose windowing or replacement thresholds");
  calibrate->add_option("--kind", kind, "windowing|solver")->capture_default_str();
  calibrate->add_option("--checkpoint", checkpoint, "Checkpoint or training directory")->required();
  calibrate->add_option("--data", data, "Dataset directory")->required();
  calibrate->add_option("--domain", scope, "Domain")->capture_default_str();
  calibrate->add_option("--quantile", quantile, "Lower quantile for theta")->capture_default_str();
  calibrate->add_option("--bin-width", bin_width, "Length bin width")->capture_default_str();
  calibrate->add_flag("--shipped-theta", shipped, "Report the shipped theta for the domain");

  std::string selector = "oracle";
  std::string solver = "oracle";
  int limit = 0;
  std::string eval_scope = "all";
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Run an engine over a test set");
  evaluate_cmd->add_option("--engine", engine, "nrs|fastnrs")->capture_default_str();
  evaluate_cmd->add_option("--selector", selector, "Checkpoint, training directory or oracle")->capture_default_str();
  evaluate_cmd->add_option("--solver", solver, "Checkpoint, training directory or oracle")->capture_default_str();
  evaluate_cmd->add_option("--data", data, "test.jsonl or its directory")->required();
  evaluate_cmd->add_option("--domain", eval_scope, "Domain or all")->capture_default_str();
  evaluate_cmd->add_option("--limit", limit, "Evaluate only the first N records");

  std::string formula;
  auto* solve = app.add_subcommand("solve", "Simplify one formula and print the trace");
  solve->add_option("--engine", engine, "nrs|fastnrs")->capture_default_str();
  solve->add_option("--selector", selector, "Checkpoint, training directory or oracle")->capture_default_str();
  solve->add_option("--solver", solver, "Checkpoint, training directory or oracle")->capture_default_str();
  solve->add_option("--domain", scope, "Domain")->capture_default_str();
  solve->add_option("formula", formula, "Formula text")->required();

  std::string traces;
  auto* report = app.add_subcommand("report", "Rebuild CSV reports from stored traces");
  report->add_option("--traces", traces, "traces.jsonl")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*datagen) return run_datagen(g, scope, full);
    if (*train) return run_train(g, module, engine, scope, data, iterations);
    if (*calibrate) return run_calibrate(g, kind, checkpoint, data, scope, quantile, bin_width, shipped);
    if (*evaluate_cmd) return run_evaluate(g, engine, selector, solver, data, eval_scope, limit);
    if (*solve) return run_solve(g, engine, selector, solver, scope, formula);
    if (*report) return run_report(g, traces);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
