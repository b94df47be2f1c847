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


#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "nrs/datagen/dataset.hpp"
#include "nrs/datagen/generator.hpp"
#include "nrs/eval/calibrate.hpp"
#include "nrs/eval/evaluate.hpp"
#include "nrs/eval/report.hpp"
#include "nrs/pipeline/stubs.hpp"
#include "nrs/term/rewrite.hpp"
#include "nrs/util/random.hpp"

using namespace nrs;

namespace {

std::vector<DatasetRecord> random_test_set(int per_domain, std::uint64_t seed) {
  std::vector<DatasetRecord> out;
  for (Domain d : kAllDomains) {
    for (int i = 0; i < per_domain; ++i) {
      const int nesting = 1 + i % 6;
      const Formula f = generate_formula(GenSpec{d, nesting, Rng::derive(seed, static_cast<std::uint64_t>(i))});
      out.push_back(DatasetRecord{f.render(), reduce_fully(f).value.render(), nesting, Split::test, d,
                                  RecordMode::end_to_end});
    }
  }
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class EmptySampler : public LeafSampler {
 public:
  std::vector<SelectorSample> sample(const std::vector<Formula>& inputs,
                                     const std::vector<std::uint64_t>&) override {
    return std::vector<SelectorSample>(inputs.size(), SelectorSample{Formula(), 0.0});
  }
};

class ConstantSampler : public LeafSampler {
 public:
  explicit ConstantSampler(double c) : c_(c) {}
  std::vector<SelectorSample> sample(const std::vector<Formula>& inputs,
                                     const std::vector<std::uint64_t>&) override {
    std::vector<SelectorSample> out;
    for (const auto& f : inputs) out.push_back({f, f.size() >= 150 ? c_ * 0.5 : c_});
    return out;
  }

 private:
  double c_;
};

}  // namespace

TEST_CASE("oracle stubs score 100% under both engines") {
  OracleSampler sampler;
  OracleSegmenter seg;
  OracleSolver solver;
  NrsEngine nrs(sampler, solver);
  FastNrsEngine fast(seg, solver);
  const auto test = random_test_set(120, 5);
  for (Engine* e : {static_cast<Engine*>(&nrs), static_cast<Engine*>(&fast)}) {
    const Evaluation ev = evaluate(*e, test, 3);
    CHECK(ev.metrics.cells.size() == 24);
    for (const auto& [key, cell] : ev.metrics.cells) {
      CHECK(cell.total == 20);
      CHECK(cell.correct == cell.total);
    }
  }
}

TEST_CASE("empty selector output fails every record") {
  EmptySampler empty;
  OracleSolver solver;
  NrsEngine nrs(empty, solver);
  const Evaluation ev = evaluate(nrs, random_test_set(12, 1), 0);
  const Cell all = ev.metrics.aggregate();
  CHECK(all.correct == 0);
  CHECK(all.errors.at(ErrorClass::missing) == all.total);
}

TEST_CASE("classify_error labels injected faults") {
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

  struct Case {
    Engine* engine;
    ErrorClass want;
  };
  const std::vector<Case> cases{{&wrong_nrs, ErrorClass::solver},     {&wrong_fast, ErrorClass::solver},
                                {&absent_nrs, ErrorClass::missing},   {&invalid_nrs, ErrorClass::malformed},
                                {&invalid_fast, ErrorClass::malformed}};
  const auto test = random_test_set(60, 9);
  int labelled = 0;
  for (const auto& c : cases) {
    const Evaluation ev = evaluate(*c.engine, test, 1);
    for (const auto& r : ev.records) {
      INFO(eval_record_to_json(r));
      // Wrong logic values can cancel out downstream; such runs are correct.
      if (r.trace.final_output == r.target) {
        CHECK(c.want == ErrorClass::solver);
        CHECK_FALSE(r.error.has_value());
        continue;
      }
      REQUIRE(r.error.has_value());
      CHECK(r.error->cls == c.want);
      CHECK(r.error->step == 0);
      ++labelled;
    }
    if (c.engine == &wrong_fast || c.engine == &invalid_fast) {
      CHECK(ev.metrics.aggregate().errors.count(ErrorClass::missing) == 0);
    }
  }
  CHECK(labelled > 4 * 240);
}

TEST_CASE("step-limit halts are timeouts") {
  OracleSampler sampler;
  OracleSegmenter seg;
  OracleSolver solver;
  const Formula f = parse("(12+(3-(4+5)))", Domain::arithmetic);
  auto a = run_nrs(f, sampler, solver, SelectorConfig::defaults(Domain::arithmetic), 0, 2);
  auto b = run_fastnrs(f, seg, solver, ReplacementPolicy::defaults(Domain::arithmetic), 0, 2);
  for (const auto& t : {a.trace, b.trace}) {
    auto e = classify_error(t, "6");
    REQUIRE(e.has_value());
    CHECK(e->cls == ErrorClass::timeout);
    CHECK(e->step == 2);
  }
  // A faulty step explains the halt.
  class Echo : public Solver {
   public:
    std::vector<SolverOutput> solve(const std::vector<Formula>& leaves) override {
      std::vector<SolverOutput> out;
      for (const auto& l : leaves) out.push_back({l, 0.0});
      return out;
    }
  } echo;
  auto c = run_nrs(f, sampler, echo, SelectorConfig::defaults(Domain::arithmetic), 0);
  CHECK(c.trace.status == RunStatus::step_limit);
  CHECK(classify_error(c.trace, "6")->cls == ErrorClass::solver);
}

TEST_CASE("accuracy and error rates sum to one per cell") {
  OracleSegmenter seg;
  WrongSolver wrong;
  OracleSolver good;
  // Alternate good and faulty solvers per record.
  class Mixed : public Solver {
   public:
    Mixed(Solver& a, Solver& b) : a_(a), b_(b) {}
    std::vector<SolverOutput> solve(const std::vector<Formula>& leaves) override {
      return (fnv1a(leaves.front().render()) % 2 ? a_ : b_).solve(leaves);
    }

   private:
    Solver& a_;
    Solver& b_;
  } mixed(wrong, good);
  FastNrsEngine fast(seg, mixed);
  const Evaluation ev = evaluate(fast, random_test_set(60, 4), 0);
  for (const auto& [key, cell] : ev.metrics.cells) {
    int errs = 0;
    for (const auto& [cls, n] : cell.errors) errs += n;
    CHECK(cell.correct + errs == cell.total);
    CHECK(cell.errors.count(ErrorClass::missing) == 0);
  }
}

TEST_CASE("reports") {
  const auto dir = std::filesystem::temp_directory_path() / "nrs_report_test";
  std::filesystem::remove_all(dir);

  // Empty evaluation: header-only CSVs.
  write_report(Evaluation{}, dir / "empty");
  CHECK(slurp(dir / "empty" / "accuracy.csv") == "domain,nesting,total,correct,accuracy\n");
  CHECK(slurp(dir / "empty" / "errors.csv") == "domain,nesting,failed,missing,malformed,solver,timeout\n");

  OracleSampler sampler;
  WrongSolver wrong;
  NrsEngine nrs(sampler, wrong);
  const Evaluation ev = evaluate(nrs, random_test_set(12, 6), 0);
  write_report(ev, dir / "a");
  const Evaluation again = reclassify("nrs", 0, read_traces(dir / "a" / "traces.jsonl"));
  write_report(again, dir / "b");
  for (const char* f : {"accuracy.csv", "errors.csv", "traces.jsonl", "manifest.txt"}) {
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
  const Manifest m = Manifest::read(dir / "a" / "manifest.txt");
  CHECK(m.get_int("records") == 48);

  const auto blocked = dir / "file";
  std::ofstream(blocked) << "x";
  CHECK_THROWS_AS(write_report(ev, blocked / "sub"), std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("windowing calibration") {
  // Step-shaped confidence at length 150.
  std::vector<LengthSample> step;
  for (std::size_t len = 20; len < 300; ++len) {
    for (int r = 0; r < 3; ++r) step.push_back({len, len < 150 ? 0.95 : 0.4});
  }
  auto c = calibrate_windowing_threshold(step);
  REQUIRE(c.threshold.has_value());
  CHECK(*c.threshold == 150);

  // Flat confidence keeps windowing off.
  std::vector<LengthSample> flat;
  for (std::size_t len = 5; len < 200; ++len) flat.push_back({len, 0.99});
  auto f = calibrate_windowing_threshold(flat);
  CHECK_FALSE(f.threshold.has_value());

  // Sparse bins are flagged and never chosen as the knee.
  std::vector<LengthSample> sparse = flat;
  sparse.push_back({500, 0.01});
  auto s = calibrate_windowing_threshold(sparse);
  CHECK(s.bins.back().sparse);
  CHECK_FALSE(s.threshold.has_value());
  CHECK(windowing_csv(s).rfind("length_lo,length_hi,count,mean_confidence,sparse\n", 0) == 0);

  // Through a sampler.
  std::vector<Formula> inputs;
  for (int n = 1; n <= 40; ++n) {
    for (int r = 0; r < 12; ++r) {
      std::string text = "1";
      for (int i = 0; i < n; ++i) text = "(2+" + text + ")";
      inputs.push_back(parse(text, Domain::arithmetic));
    }
  }
  ConstantSampler constant(0.9);
  auto via = calibrate_windowing_threshold(selector_confidences(constant, inputs, 0), WindowingOptions{20, 10, 0.9});
  REQUIRE(via.threshold.has_value());
  CHECK(*via.threshold == 140);  // first 20-token bin reaching length 150
}

TEST_CASE("solver calibration") {
  std::vector<double> confident(1000, -1e-4);
  confident[0] = -2e-3;
  auto c = calibrate_solver_threshold(confident, Domain::logic);
  CHECK(c.theta <= 0.0);
  CHECK(c.theta > -0.005);

  Rng rng(8);
  std::vector<double> spread;
  for (int i = 0; i < 5000; ++i) spread.push_back(-std::abs(rng.normal()) * 3);
  auto z = calibrate_solver_threshold(spread, Domain::arithmetic, SolverCalibrationOptions{0.0});
  CHECK(z.theta == z.minimum);
  CHECK(z.theta == *std::min_element(spread.begin(), spread.end()));
  int total = 0;
  for (const auto& b : z.histogram) total += b.count;
  CHECK(total == 5000);
  CHECK(solver_histogram_csv(z).rfind("lo,hi,count,log10_count\n", 0) == 0);

  auto shipped = calibrate_solver_threshold(spread, Domain::listops, SolverCalibrationOptions{0.001, 40, true});
  CHECK(shipped.theta == -6.0);

  OracleSolver oracle;
  std::vector<Formula> leaves{parse("(1+2)", Domain::arithmetic), parse("(3*4)", Domain::arithmetic)};
  for (double v : solver_log_confidences(oracle, leaves)) CHECK(v == 0.0);
}
