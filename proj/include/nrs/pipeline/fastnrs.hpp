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

#ifndef NRS_PIPELINE_FASTNRS_HPP_
#define NRS_PIPELINE_FASTNRS_HPP_

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "nrs/pipeline/nrs.hpp"
#include "nrs/pipeline/types.hpp"

namespace nrs {

struct ReplacementPolicy {
  double theta = 0.0;

  // Shipped per-domain thresholds: -6 ListOps, -2 Arithmetic, -3 Algebra,
  // -0.005 Logic.
  static double default_threshold(Domain domain);
  static ReplacementPolicy defaults(Domain domain) { return {default_threshold(domain)}; }
};

struct ExtractedLeaf {
  std::size_t start = 0;
  std::size_t end = 0;
  Formula tokens;
};

std::vector<int> segment(const Formula& f, Segmenter& segmenter, std::uint64_t seed);

// Maximal runs of positive tokens, left to right. A run is also cut where a
// closing bracket is directly followed by an opening bracket, since no leaf
// contains that pair (adjacent ListOps leaves would otherwise merge).
std::vector<ExtractedLeaf> extract(const std::vector<int>& mask, const Formula& f);

SolverOutput solve_leaf(const Formula& leaf, Solver& solver);

// Splices e over the leaf span when c_e >= theta.
std::pair<Formula, bool> cond_repl(const Formula& f, const ExtractedLeaf& leaf, const Formula& e, double c_e,
                                   const ReplacementPolicy& policy);

RunResult run_fastnrs(const Formula& f, Segmenter& selector, Solver& solver, const ReplacementPolicy& policy,
                      std::uint64_t run_seed, std::optional<int> step_limit = std::nullopt);

}  // namespace nrs

#endif  // NRS_PIPELINE_FASTNRS_HPP_
