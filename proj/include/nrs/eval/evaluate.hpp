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


#ifndef NRS_EVAL_EVALUATE_HPP_
#define NRS_EVAL_EVALUATE_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nrs/datagen/dataset.hpp"
#include "nrs/pipeline/fastnrs.hpp"
#include "nrs/pipeline/nrs.hpp"

namespace nrs {

class Engine {
 public:
  virtual ~Engine() = default;
  virtual std::string_view name() const = 0;
  virtual RunResult run(const Formula& f, std::uint64_t seed) = 0;
};

// Borrowed modules; per-domain settings fall back to the shipped defaults.
class NrsEngine : public Engine {
 public:
  NrsEngine(LeafSampler& selector, Solver& solver, std::map<Domain, SelectorConfig> configs = {})
      : selector_(selector), solver_(solver), configs_(std::move(configs)) {}
  std::string_view name() const override { return "nrs"; }
  RunResult run(const Formula& f, std::uint64_t seed) override;
  SelectorConfig config(Domain d) const;

 private:
  LeafSampler& selector_;
  Solver& solver_;
  std::map<Domain, SelectorConfig> configs_;
};

class FastNrsEngine : public Engine {
 public:
  FastNrsEngine(Segmenter& selector, Solver& solver, std::map<Domain, ReplacementPolicy> policies = {})
      : selector_(selector), solver_(solver), policies_(std::move(policies)) {}
  std::string_view name() const override { return "fastnrs"; }
  RunResult run(const Formula& f, std::uint64_t seed) override;
  ReplacementPolicy policy(Domain d) const;

 private:
  Segmenter& selector_;
  Solver& solver_;
  std::map<Domain, ReplacementPolicy> policies_;
};

enum class ErrorClass { missing, malformed, solver, timeout };
inline constexpr std::array<ErrorClass, 4> kErrorClasses{ErrorClass::missing, ErrorClass::malformed,
                                                         ErrorClass::solver, ErrorClass::timeout};
std::string_view error_class_name(ErrorClass c);
ErrorClass parse_error_class(std::string_view name);

struct ErrorRecord {
  ErrorClass cls = ErrorClass::solver;
  // Index of the first faulty step; the step count when none was found.
  int step = 0;
  // The offending candidate, leaf or output.
  std::string payload;
};

// A run is correct when it completed with the target as its output.
bool is_correct(const RunTrace& trace, std::string_view target);

// First faulty step of an incorrect run, judged against apply_rule:
//  - NRS step without a chosen candidate: missing.
//  - chosen NRS candidate, or a FastNRS leaf that was replaced or answered
//    ω, that is not a leaf span of the step input: malformed.
//  - Solver output that differs from apply_rule on a valid leaf: solver.
//  - a FastNRS iteration that replaced nothing: malformed when its mask
//    held no leaf or an invalid one, otherwise solver.
// A run halted by the step limit with no faulty step is timeout. nullopt
// for correct runs.
std::optional<ErrorRecord> classify_error(const RunTrace& trace, std::string_view target);

struct EvalRecord {
  int nesting = 0;
  std::string target;
  RunTrace trace;
  std::optional<ErrorRecord> error;
};

struct Cell {
  int total = 0;
  int correct = 0;
  std::map<ErrorClass, int> errors;

  double accuracy() const { return total ? static_cast<double>(correct) / total : 0.0; }
};

struct Metrics {
  std::map<std::pair<Domain, int>, Cell> cells;

  Cell aggregate() const;
  Cell aggregate(Domain d) const;
};

struct Evaluation {
  std::string engine;
  std::uint64_t seed = 0;
  Metrics metrics;
  std::vector<EvalRecord> records;
};

// Runs every end-to-end record; record i uses seed derive(seed, i).
Evaluation evaluate(Engine& engine, const std::vector<DatasetRecord>& test_set, std::uint64_t seed);

// Rebuilds metrics and error labels from stored traces.
Evaluation reclassify(std::string engine, std::uint64_t seed, std::vector<EvalRecord> records);

std::string eval_record_to_json(const EvalRecord& r);
EvalRecord eval_record_from_json(std::string_view line);

}  // namespace nrs

#endif  // NRS_EVAL_EVALUATE_HPP_
