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

#ifndef NRS_PIPELINE_TYPES_HPP_
#define NRS_PIPELINE_TYPES_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nrs/term/formula.hpp"

namespace nrs {

// Log-confidence reported when a Solver could not produce any output.
inline constexpr double kNoConfidence = -1e9;

struct SelectorSample {
  Formula tokens;
  // Product of the emitted-token probabilities.
  double confidence = 1.0;
};

struct SolverOutput {
  // Atomic value tokens or ω.
  Formula value;
  // Sum of emitted-token log-probabilities.
  double log_confidence = 0.0;
};

// Seq2seq Selector: one sampled leaf per (input, seed) pair.
class LeafSampler {
 public:
  virtual ~LeafSampler() = default;
  virtual std::vector<SelectorSample> sample(const std::vector<Formula>& inputs,
                                             const std::vector<std::uint64_t>& seeds) = 0;
};

// Segmentation Selector: one 0/1 decision per token.
class Segmenter {
 public:
  virtual ~Segmenter() = default;
  virtual std::vector<std::vector<int>> segment(const std::vector<Formula>& inputs,
                                                const std::vector<std::uint64_t>& seeds) = 0;
};

class Solver {
 public:
  virtual ~Solver() = default;
  virtual std::vector<SolverOutput> solve(const std::vector<Formula>& leaves) = 0;
};

// How an engine run ended. Whether the result is correct is decided later
// against the oracle.
enum class RunStatus {
  completed,     // the Solver emitted ω
  no_candidate,  // NRS: no candidate reached agreement 1
  no_replacement,  // FastNRS: an iteration replaced nothing
  step_limit,
};

std::string_view run_status_name(RunStatus status);
RunStatus parse_run_status(std::string_view name);

struct CandidateRecord {
  std::string tokens;
  double confidence = 0.0;
  double agreement = 0.0;
  std::size_t window_offset = 0;
};

struct LeafRecord {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string tokens;
  std::string output;
  double log_confidence = 0.0;
  bool replaced = false;
};

struct TraceStep {
  int index = 0;
  std::string input;
  // NRS fields.
  std::vector<CandidateRecord> candidates;
  std::optional<CandidateRecord> chosen;
  std::size_t position = 0;
  // FastNRS fields.
  std::string mask;
  std::vector<LeafRecord> leaves;
  // Shared.
  std::string solver_output;
  double solver_log_confidence = 0.0;
  std::string output;
};

struct RunTrace {
  std::string engine;
  Domain domain = Domain::logic;
  std::string input;
  std::vector<TraceStep> steps;
  RunStatus status = RunStatus::completed;
  std::optional<std::string> final_output;
};

std::string trace_to_json(const RunTrace& trace);
RunTrace trace_from_json(std::string_view line);

}  // namespace nrs

#endif  // NRS_PIPELINE_TYPES_HPP_
