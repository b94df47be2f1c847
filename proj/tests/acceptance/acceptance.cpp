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


// Acceptance run: one PASS/FAIL line per criterion. Criteria 7 to 9 train
// desk-scale models from configs/desk and take several minutes on a CPU.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nrs/datagen/dataset.hpp"
#include "nrs/datagen/generator.hpp"
#include "nrs/eval/evaluate.hpp"
#include "nrs/nn/layers.hpp"
#include "nrs/nn/optim.hpp"
#include "nrs/nn/positional.hpp"
#include "nrs/nn/sampling.hpp"
#include "nrs/nn/transformer.hpp"
#include "nrs/pipeline/fastnrs.hpp"
#include "nrs/pipeline/neural.hpp"
#include "nrs/pipeline/nrs.hpp"
#include "nrs/pipeline/stubs.hpp"
#include "nrs/term/rewrite.hpp"
#include "nrs/train/trainer.hpp"

namespace fs = std::filesystem;
using namespace nrs;
using nn::Matrix;

namespace {

// Tolerances.
constexpr double kMaskTol = 1e-12;
constexpr double kGradTol = 1e-4;
constexpr double kConfidenceTol = 1e-9;
constexpr double kSegIdTarget = 0.95;
constexpr double kSegOodTarget = 0.90;
constexpr double kE2eShallowTarget = 0.90;  // nesting 1..6
constexpr double kE2eDeepTarget = 0.75;     // nesting 7..12
constexpr double kAblationGap = 0.02;
constexpr double kFastSeconds = 60.0;
constexpr int kTrainBudget = 5000;

constexpr std::uint64_t kDataSeed = 7;
constexpr std::uint64_t kTrainSeed = 1;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::map<int, Outcome> results;

void report(int id, const std::string& title, Outcome o) {
  std::printf("%s  %2d  %s: %s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str());
  std::fflush(stdout);
  results[id] = std::move(o);
}

void info(const std::string& s) {
  std::printf("INFO      %s\n", s.c_str());
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * v);
  return buf;
}

// 1 -------------------------------------------------------------------------

Outcome oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<DatasetRecord> test;
  for (Domain d : kAllDomains) {
    auto part = build_test_set(d, SplitSpec::desk(d), kDataSeed);
    test.insert(test.end(), part.begin(), part.end());
  }
  OracleSampler sampler;
  OracleSegmenter seg;
  OracleSolver solver;
  NrsEngine slow(sampler, solver);
  FastNrsEngine fast(seg, solver);
  bool ok = test.size() == 1200 + 3 * 600;
  std::size_t cells = 0;
  int worst_correct = 0, worst_total = 0;
  for (Engine* e : {static_cast<Engine*>(&slow), static_cast<Engine*>(&fast)}) {
    const Evaluation ev = evaluate(*e, test, kDataSeed);
    cells += ev.metrics.cells.size();
    for (const auto& [key, cell] : ev.metrics.cells) {
      if (cell.correct != cell.total) {
        ok = false;
        worst_correct = cell.correct;
        worst_total = cell.total;
      }
    }
  }
  const double secs = seconds_since(t0);
  ok = ok && cells == 2 * (12 + 3 * 6) && secs < kFastSeconds;
  std::string detail = std::to_string(test.size()) + " records, " + std::to_string(cells) + " cells";
  if (worst_total) detail += ", a cell at " + std::to_string(worst_correct) + "/" + std::to_string(worst_total);
  return {ok, detail + ", " + fmt(secs, 3) + " s"};
}

// 2 -------------------------------------------------------------------------

// Every value reachable by rewriting any leaf at each step.
void reachable_values(const Formula& f, std::map<std::string, std::set<std::string>>& memo,
                      std::set<std::string>& out) {
  const std::string key = f.render();
  if (auto it = memo.find(key); it != memo.end()) {
    out.insert(it->second.begin(), it->second.end());
    return;
  }
  std::set<std::string> mine;
  if (f.is_atomic()) {
    mine.insert(key);
  } else {
    for (const LeafSpan& s : find_leaf_spans(f)) {
      Formula leaf(f.domain(), s.tokens);
      reachable_values(splice(f, s.start, s.end, apply_rule(leaf)), memo, mine);
    }
  }
  memo[key] = mine;
  out.insert(mine.begin(), mine.end());
}

Outcome confluence() {
  const auto t0 = std::chrono::steady_clock::now();
  int bad = 0, total = 0;
  for (Domain d : kAllDomains) {
    for (int i = 0; i < 1000; ++i) {
      const Formula f = generate_formula({d, 1 + i % 4, Rng::derive(101, static_cast<std::uint64_t>(i))});
      std::map<std::string, std::set<std::string>> memo;
      std::set<std::string> values;
      reachable_values(f, memo, values);
      ++total;
      if (values.size() != 1 || *values.begin() != reduce_fully(f).value.render()) ++bad;
    }
  }
  const double secs = seconds_since(t0);
  return {bad == 0 && secs < kFastSeconds,
          std::to_string(total - bad) + "/" + std::to_string(total) + " formulas, " + fmt(secs, 3) + " s"};
}

// 3 -------------------------------------------------------------------------

MatchResult naive_match(const Formula& f, const Formula& leaf) {
  MatchResult best;
  if (leaf.empty() || leaf.size() > f.size()) return best;
  bool any = false;
  for (std::size_t o = f.size() - leaf.size() + 1; o-- > 0;) {
    std::size_t s = 0;
    for (std::size_t i = 0; i < leaf.size(); ++i) s += f.tokens()[o + i] == leaf.tokens()[i];
    if (!any || s > best.score) {
      best = MatchResult{o, s, 0.0};
      any = true;
    }
  }
  best.agreement = static_cast<double>(best.score) / static_cast<double>(leaf.size());
  return best;
}

bool contiguous(const Formula& f, const Formula& part) {
  return std::search(f.tokens().begin(), f.tokens().end(), part.tokens().begin(), part.tokens().end()) !=
         f.tokens().end();
}

Outcome combiner_equivalence() {
  Rng rng(303);
  int bad = 0;
  const int pairs = 10000;
  for (int n = 0; n < pairs; ++n) {
    const Domain d = kAllDomains[static_cast<std::size_t>(n % 4)];
    const Formula f = generate_formula({d, 1 + static_cast<int>(rng.index(6)), rng.next()});
    const auto spans = find_leaf_spans(f);
    std::vector<std::string> toks;
    switch (rng.index(3)) {
      case 0:
        toks = spans[rng.index(spans.size())].tokens;
        break;
      case 1:
        toks = spans[rng.index(spans.size())].tokens;
        toks[rng.index(toks.size())] = f.tokens()[rng.index(f.size())];
        break;
      default: {
        const std::size_t a = rng.index(f.size());
        const std::size_t b = std::min(f.size(), a + 1 + rng.index(10));
        toks = f.slice(a, b).tokens();
        if (rng.bernoulli(0.5)) std::reverse(toks.begin(), toks.end());
      }
    }
    const Formula leaf(d, toks);
    const MatchResult got = match_convolve(f, leaf);
    const MatchResult want = naive_match(f, leaf);
    if (got.position != want.position || got.agreement != want.agreement ||
        (got.agreement == 1.0) != contiguous(f, leaf)) {
      ++bad;
    }
  }
  return {bad == 0, std::to_string(pairs - bad) + "/" + std::to_string(pairs) + " pairs"};
}

// 4 -------------------------------------------------------------------------

nn::ModelConfig small_config(int window) {
  nn::ModelConfig c;
  c.vocab_size = 11;
  c.embedding = 16;
  c.encoder_layers = 2;
  c.decoder_layers = 0;
  c.heads = 4;
  c.feedforward = 32;
  c.dropout = 0.0;
  c.window = window;
  c.max_length = 64;
  return c;
}

Outcome attention_locality() {
  Rng rng(404);
  double worst_outside = 0.0;
  for (int k : {1, 2, 4}) {
    const nn::ModelConfig c = small_config(k);
    nn::ParameterStore<double> store;
    nn::MultiHeadAttention<double> attn(store, "a", c.embedding, c.heads, rng);
    const std::vector<int> lengths{33, 7, 1};
    int rows = 0;
    for (int n : lengths) rows += n;
    Matrix<double> x(rows, c.embedding);
    nn::init_normal(x, 3.0, rng);
    const nn::Layout layout = nn::Layout::from_lengths(lengths);
    attn.forward(x, layout, x, layout, {nn::MaskKind::diagonal, k});
    for (std::size_t b = 0; b < lengths.size(); ++b) {
      for (int h = 0; h < c.heads; ++h) {
        const auto& w = attn.attention_weights(static_cast<int>(b), h);
        for (int i = 0; i < w.rows(); ++i) {
          for (int j = 0; j < w.cols(); ++j) {
            if (std::abs(i - j) > k) worst_outside = std::max(worst_outside, static_cast<double>(w(i, j)));
          }
        }
      }
    }
  }

  // Central differences on a 2-layer masked encoder. Key biases are left
  // out: softmax is shift invariant, so their true gradient is zero.
  const nn::ModelConfig c = small_config(1);
  nn::ParameterStore<double> store;
  nn::Encoder<double> enc(store, "enc", c, rng);
  std::vector<std::vector<int>> seqs{{3, 4, 5, 6, 7, 8, 9, 10, 3}, {5, 9, 4, 4, 6}};
  std::vector<std::vector<int>> labels{{0, 2, 5, 9, 11, 20, 33, 40, 63}, {1, 7, 8, 30, 31}};
  Matrix<double> weight(14, c.embedding);
  nn::init_normal(weight, 1.0, rng);
  auto loss = [&](bool backward) {
    Rng drop(0);
    Matrix<double> out = enc.forward(seqs, labels, true, drop);
    if (backward) enc.backward(weight);
    return out.cwiseProduct(weight).sum();
  };
  std::vector<nn::Parameter<double>*> trainable;
  for (auto& p : store.all()) {
    if (p.trainable && !p.name.ends_with(".k.bias")) trainable.push_back(&p);
  }
  store.zero_grad();
  loss(true);
  double worst_grad = 0.0;
  const double eps = 1e-5;
  for (int n = 0; n < 50; ++n) {
    nn::Parameter<double>* p = trainable[rng.index(trainable.size())];
    const auto i = static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(p->value.size())));
    const double analytic = p->grad.data()[i];
    const double saved = p->value.data()[i];
    p->value.data()[i] = saved + eps;
    const double up = loss(false);
    p->value.data()[i] = saved - eps;
    const double down = loss(false);
    p->value.data()[i] = saved;
    const double numeric = (up - down) / (2 * eps);
    worst_grad = std::max(worst_grad, std::abs(analytic - numeric) /
                                          std::max(std::abs(analytic) + std::abs(numeric), 1e-6));
  }
  return {worst_outside <= kMaskTol && worst_grad < kGradTol,
          "max weight outside window " + fmt(worst_outside) + ", worst relative gradient error " +
              fmt(worst_grad)};
}

// 5 -------------------------------------------------------------------------

Outcome positional_labels() {
  Rng rng(505);
  int bad = 0;
  for (int n = 0; n < 1000; ++n) {
    const auto labels = nn::sample_sorted_labels(64, 1024, rng);
    bool ok = labels.size() == 64 && labels.front() >= 0 && labels.back() <= 1023;
    for (std::size_t i = 1; ok && i < labels.size(); ++i) ok = labels[i - 1] < labels[i];
    bad += !ok;
  }
  nn::ModelConfig c = small_config(1);
  c.max_length = 1024;
  nn::ParameterStore<double> store;
  nn::Encoder<double> enc(store, "enc", c, rng);
  std::vector<std::vector<int>> seqs(3, std::vector<int>(64, 4));
  for (auto& s : seqs) {
    for (auto& t : s) t = 3 + static_cast<int>(rng.index(8));
  }
  std::vector<std::vector<int>> labels;
  for (std::size_t i = 0; i < seqs.size(); ++i) labels.push_back(nn::sample_sorted_labels(64, 1024, rng));
  Matrix<double> weight(3 * 64, c.embedding);
  nn::init_normal(weight, 1.0, rng);
  const Matrix<double> before = enc.positions().table()->value;
  store.zero_grad();
  Rng drop(0);
  enc.forward(seqs, labels, true, drop);
  enc.backward(weight);
  const double table_grad = enc.positions().table()->grad.cwiseAbs().maxCoeff();
  nn::Adam<double> adam(store);
  adam.step(1e-2);
  const bool unchanged = enc.positions().table()->value == before;
  return {bad == 0 && table_grad == 0.0 && unchanged,
          std::to_string(1000 - bad) + "/1000 draws valid, max table gradient " + fmt(table_grad) +
              (unchanged ? ", table unchanged by an optimizer step" : ", table moved")};
}

// 6 -------------------------------------------------------------------------

Outcome confidence_algebra() {
  Rng rng(606);
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    std::vector<double> p(1 + rng.index(64));
    for (auto& v : p) v = 1e-3 + (1 - 1e-3) * rng.uniform();
    const double prod = nn::sequence_confidence(p, nn::ConfidenceMode::product);
    const double logs = nn::sequence_confidence(p, nn::ConfidenceMode::log_sum);
    worst = std::max(worst, std::abs(std::log(prod) - logs));
  }
  const std::vector<double> ones(17, 1.0);
  const bool exact = nn::sequence_confidence(ones, nn::ConfidenceMode::product) == 1.0 &&
                     nn::sequence_confidence(ones, nn::ConfidenceMode::log_sum) == 0.0;
  return {worst <= kConfidenceTol && exact,
          "worst |log prod - sum log| " + fmt(worst) + (exact ? ", ones give 1 / 0" : ", ones inexact")};
}

// 11 ------------------------------------------------------------------------

Outcome threshold_constants() {
  const std::map<Domain, std::optional<int>> want_t{
      {Domain::listops, 150}, {Domain::algebra, 150}, {Domain::arithmetic, 125}, {Domain::logic, std::nullopt}};
  const std::map<Domain, double> want_theta{
      {Domain::listops, -6.0}, {Domain::algebra, -3.0}, {Domain::arithmetic, -2.0}, {Domain::logic, -0.005}};
  bool ok = true;
  std::string detail;
  for (Domain d : kAllDomains) {
    const auto t = SelectorConfig::default_threshold(d);
    const double theta = ReplacementPolicy::default_threshold(d);
    ok = ok && t == want_t.at(d) && theta == want_theta.at(d);
    detail += std::string(detail.empty() ? "" : ", ") + std::string(domain_name(d)) + " T=" +
              (t ? std::to_string(*t) : "off") + " theta=" + fmt(theta);
  }
  return {ok, detail};
}

// 7 to 10 -------------------------------------------------------------------

const std::vector<DatasetRecord>& file(const DatagenOutput& out, const std::string& name) {
  for (const auto& [n, records] : out.files) {
    if (n == name) return records;
  }
  throw std::runtime_error("datagen produced no " + name);
}

struct SegmenterRun {
  double id = 0.0;
  double ood = 0.0;
  int iteration = 0;
  double seconds = 0.0;
  fs::path checkpoint;
};

bool reuse = false;

SegmenterRun train_segmenter(const fs::path& cfg_path, const DatagenOutput& data, const fs::path& out) {
  TrainConfig cfg = TrainConfig::read(cfg_path);
  cfg.seed = kTrainSeed;
  const TrainData td{file(data, "selector_segmentation.train"), file(data, "selector_segmentation.id_val"),
                     file(data, "selector_segmentation.ood_val"), file(data, "test")};
  SegmenterRun run;
  const fs::path marker = out / "selected.txt";
  if (reuse && fs::exists(marker)) {
    std::ifstream in(marker);
    std::string path;
    in >> path >> run.iteration >> run.seconds;
    run.checkpoint = path;
  } else {
    fs::remove_all(out);
    const TrainResult r = train_module(cfg, td, out, [](const LogRow& row) {
      std::fprintf(stderr, "  iter %d loss %.4g id %.4f ood %.4f\n", row.iteration, row.loss, row.id_metric,
                   row.ood_metric);
    });
    if (r.checkpoints.empty()) throw std::runtime_error("segmenter training produced no checkpoint");
    const Checkpoint& best = select_model_on_ood(r.checkpoints);
    run.iteration = best.iteration;
    run.seconds = r.seconds;
    run.checkpoint = best.dir;
    std::ofstream(marker) << best.dir.string() << " " << best.iteration << " " << r.seconds << "\n";
  }
  // Re-score the selected checkpoint on the complete validation splits.
  LoadedSegmenter m = load_segmenter(run.checkpoint);
  run.id = exact_mask_accuracy(*m.model, encode_segmentation(td.id_val, m.vocab), nn::LabelMode::random, 11);
  run.ood = exact_mask_accuracy(*m.model, encode_segmentation(td.ood_val, m.vocab), nn::LabelMode::random, 12);
  return run;
}

// Without a validation split the last checkpoint is taken.
Checkpoint train_solver(const fs::path& cfg_path, const TrainData& td, const fs::path& out) {
  TrainConfig cfg = TrainConfig::read(cfg_path);
  cfg.seed = kTrainSeed;
  fs::remove_all(out);
  const TrainResult r = train_module(cfg, td, out);
  if (r.checkpoints.empty()) throw std::runtime_error("solver training produced no checkpoint");
  return td.id_val.empty() ? r.checkpoints.back() : select_model_on_ood(r.checkpoints);
}

Evaluation end_to_end(const fs::path& segmenter_ckpt, const fs::path& solver_ckpt,
                      const std::vector<DatasetRecord>& test) {
  LoadedSegmenter seg = load_segmenter(segmenter_ckpt);
  LoadedSeq2Seq sol = load_seq2seq(solver_ckpt);
  NeuralSegmenter segmenter(*seg.model, seg.vocab);
  NeuralSolver solver(*sol.model, sol.vocab);
  FastNrsEngine engine(segmenter, solver);
  const auto t0 = std::chrono::steady_clock::now();
  Evaluation ev = evaluate(engine, test, kDataSeed);
  std::string per;
  for (const auto& [key, cell] : ev.metrics.cells) per += (per.empty() ? "" : " ") + std::to_string(cell.correct);
  info("correct per nesting 1..12 (of 100): " + per + ", " + fmt(seconds_since(t0), 3) + " s");
  return ev;
}

std::pair<Cell, Cell> by_depth(const Evaluation& ev) {
  Cell shallow, deep;
  for (const auto& [key, cell] : ev.metrics.cells) {
    Cell& c = key.second <= 6 ? shallow : deep;
    c.total += cell.total;
    c.correct += cell.correct;
  }
  return {shallow, deep};
}

struct FaultSet {
  std::string name;
  Engine* engine;
  ErrorClass want;
  int quota;
};

Outcome error_taxonomy(const std::vector<const Evaluation*>& fast_evals) {
  OracleSampler good_sampler;
  OracleSegmenter good_seg;
  OracleSolver good_solver;
  WrongSolver wrong;
  AbsentSampler absent;
  InvalidSpanSampler invalid;
  InvalidMaskSegmenter invalid_mask;
  NrsEngine wrong_nrs(good_sampler, wrong);
  FastNrsEngine wrong_fast(good_seg, wrong);
  NrsEngine absent_nrs(absent, good_solver);
  NrsEngine invalid_nrs(invalid, good_solver);
  FastNrsEngine invalid_fast(invalid_mask, good_solver);
  std::vector<FaultSet> sets{{"wrong-solver/nrs", &wrong_nrs, ErrorClass::solver, 50},
                             {"wrong-solver/fastnrs", &wrong_fast, ErrorClass::solver, 50},
                             {"absent/nrs", &absent_nrs, ErrorClass::missing, 100},
                             {"invalid-span/nrs", &invalid_nrs, ErrorClass::malformed, 50},
                             {"invalid-span/fastnrs", &invalid_fast, ErrorClass::malformed, 50}};
  int traces = 0, right = 0;
  std::uint64_t missing_fast = 0;
  for (auto& s : sets) {
    int got = 0;
    for (std::uint64_t i = 0; got < s.quota && i < 100000; ++i) {
      const Domain d = kAllDomains[i % 4];
      const Formula f = generate_formula({d, 1 + static_cast<int>(i / 4 % 6), Rng::derive(1010, i)});
      const std::string target = reduce_fully(f).value.render();
      const RunTrace trace = s.engine->run(f, Rng::derive(1011, i)).trace;
      if (trace.final_output == target) continue;  // the fault did not manifest
      ++got;
      const auto err = classify_error(trace, target);
      right += err && err->cls == s.want;
      if (err && err->cls == ErrorClass::missing && trace.engine == "fastnrs") ++missing_fast;
    }
    traces += got;
  }
  for (const Evaluation* ev : fast_evals) {
    const Cell all = ev->metrics.aggregate();
    if (auto it = all.errors.find(ErrorClass::missing); it != all.errors.end()) missing_fast += it->second;
  }
  return {traces == 300 && right == traces && missing_fast == 0,
          std::to_string(right) + "/" + std::to_string(traces) + " traces labelled, " +
              std::to_string(missing_fast) + " missing in FastNRS evaluations"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::string work = (fs::temp_directory_path() / "nrs_acceptance").string();
  std::string configs = std::string(NRS_SOURCE_DIR) + "/configs/desk";
  bool diagnostics = false;
  app.add_option("--work", work, "Directory for datasets and checkpoints");
  app.add_option("--configs", configs, "Directory holding the desk training configs");
  app.add_flag("--reuse", reuse, "Reuse segmenters already trained in the work directory");
  app.add_flag("--diagnostics", diagnostics, "Also train the three-layer segmenter for comparison");
  CLI11_PARSE(app, argc, argv);
  const fs::path dir(work);
  fs::create_directories(dir);
  const fs::path cfg_dir(configs);

  auto guarded = [](int id, const std::string& title, auto fn) {
    try {
      report(id, title, fn());
    } catch (const std::exception& e) {
      report(id, title, {false, std::string("exception: ") + e.what()});
    }
  };

  guarded(1, "oracle end-to-end equivalence", oracle_equivalence);
  guarded(2, "confluence over rewrite orders", confluence);
  guarded(3, "combiner matches the naive oracle", combiner_equivalence);
  guarded(4, "attention mask locality and gradients", attention_locality);
  guarded(5, "label positional encodings", positional_labels);
  guarded(6, "confidence algebra", confidence_algebra);
  guarded(11, "shipped threshold constants", threshold_constants);

  std::optional<Evaluation> e2e;
  try {
    const auto t0 = std::chrono::steady_clock::now();
    const DatagenOutput data = generate_datasets({Domain::logic}, kDataSeed, false);
    info("logic desk datasets generated in " + fmt(seconds_since(t0), 3) + " s");

    std::optional<SegmenterRun> k1, k4;
    fs::path solver_ckpt;
    guarded(7, "desk segmenter, logic, 2 layers k=1", [&] {
      k1 = train_segmenter(cfg_dir / "fastnrs_selector_logic.cfg", data, dir / "segmenter_k1");
      return Outcome{k1->id >= kSegIdTarget && k1->ood >= kSegOodTarget,
                     "ID " + pct(k1->id) + ", OOD " + pct(k1->ood) + " (selected iteration " +
                         std::to_string(k1->iteration) + ", " + fmt(k1->seconds, 3) + " s)"};
    });

    guarded(9, "window ablation, k=1 over k=4", [&] {
      if (!k1) throw std::runtime_error("no k=1 model");
      k4 = train_segmenter(cfg_dir / "fastnrs_selector_logic_k4.cfg", data, dir / "segmenter_k4");
      const double gap = k1->ood - k4->ood;
      return Outcome{gap >= kAblationGap, "OOD k=1 " + pct(k1->ood) + ", k=4 " + pct(k4->ood) + " (ID " +
                                              pct(k4->id) + "), gap " + fmt(100 * gap, 3) + " pp"};
    });

    guarded(8, "desk end-to-end FastNRS, logic", [&] {
      if (!k1) throw std::runtime_error("no k=1 model");
      const auto& sol_train = file(data, "solver.train");
      const auto& sol_val = file(data, "solver.id_val");
      // Held-out rule-table entries have no analogue in the training half
      // (e.g. the only NOT-True leaf), so the split model is reported but
      // the pipeline uses the Solver trained on the whole rule table.
      const Checkpoint split = train_solver(cfg_dir / "solver_logic.cfg",
                                            TrainData{sol_train, sol_val, {}, {}}, dir / "solver_split");
      std::vector<DatasetRecord> table = sol_train;
      table.insert(table.end(), sol_val.begin(), sol_val.end());
      const Checkpoint full = train_solver(cfg_dir / "solver_logic.cfg", TrainData{table, {}, {}, {}},
                                           dir / "solver_full");

      solver_ckpt = full.dir;
      LoadedSeq2Seq sol = load_seq2seq(full.dir);
      const double table_acc =
          exact_sequence_accuracy(*sol.model, encode_seq2seq(table, sol.vocab), nn::LabelMode::random, 13);
      info("solver exact match: held-out split " + pct(split.id_metric) + " (iteration " +
           std::to_string(split.iteration) + "), whole-table model on the table " + pct(table_acc));
      e2e = end_to_end(k1->checkpoint, full.dir, file(data, "test"));
      const auto [shallow, deep] = by_depth(*e2e);
      return Outcome{shallow.accuracy() >= kE2eShallowTarget && deep.accuracy() >= kE2eDeepTarget,
                     "nesting 1-6 " + pct(shallow.accuracy()) + ", nesting 7-12 " + pct(deep.accuracy())};
    });

    if (diagnostics) {
      const SegmenterRun r3 = train_segmenter(cfg_dir / "fastnrs_selector_logic_3layer.cfg", data,
                                              dir / "segmenter_3layer");
      info("three-layer segmenter: ID " + pct(r3.id) + ", OOD " + pct(r3.ood) + " (selected iteration " +
           std::to_string(r3.iteration) + ")");
      if (!solver_ckpt.empty()) {
        const Evaluation ev = end_to_end(r3.checkpoint, solver_ckpt, file(data, "test"));
        const auto [shallow, deep] = by_depth(ev);
        info("three-layer end-to-end: nesting 1-6 " + pct(shallow.accuracy()) + ", nesting 7-12 " +
             pct(deep.accuracy()));
      }
    }
  } catch (const std::exception& e) {
    for (int id : {7, 8, 9}) {
      if (!results.count(id)) report(id, "desk training", {false, std::string("exception: ") + e.what()});
    }
  }

  std::vector<const Evaluation*> fast_evals;
  if (e2e) fast_evals.push_back(&*e2e);
  guarded(10, "error taxonomy fidelity", [&] { return error_taxonomy(fast_evals); });

  int failed = 0;
  std::printf("\nsummary:");
  for (const auto& [id, o] : results) {
    std::printf(" %d=%s", id, o.pass ? "PASS" : "FAIL");
    failed += !o.pass;
  }
  std::printf("\n%d of %zu criteria pass\n", static_cast<int>(results.size()) - failed, results.size());
  return failed == 0 ? 0 : 1;
}
