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

#ifndef NRS_PIPELINE_NRS_HPP_
#define NRS_PIPELINE_NRS_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "nrs/pipeline/types.hpp"
#include "nrs/term/domain.hpp"
#include "nrs/term/formula.hpp"

namespace nrs {

inline constexpr int kWindowGroups = 20;

struct SelectorConfig {
  int M = 10;
  // Dynamic windowing applies to inputs of at least T tokens; nullopt
  // disables it.
  std::optional<int> T;

  // Shipped per-domain thresholds: 150 ListOps, 150 Algebra, 125
  // Arithmetic, disabled for Logic.
  static std::optional<int> default_threshold(Domain domain);
  static SelectorConfig defaults(Domain domain, int M = 10);
};

struct LeafCandidate {
  Formula tokens;
  double confidence = 0.0;
  double agreement = 0.0;
  // Tokens removed from the front by windowing.
  std::size_t window_offset = 0;
  // Start of the best match in full-formula coordinates.
  std::size_t position = 0;
};

struct MatchResult {
  std::size_t position = 0;
  std::size_t score = 0;
  double agreement = 0.0;
};

// Suffix of f without its first k tokens. Throws std::out_of_range when
// k >= |f|.
Formula window(const Formula& f, std::size_t k);

// Window size of trial i: floor(|f| * (i mod 20) / 20).
std::size_t window_size(std::size_t length, int trial);

// Slides the one-hot leaf over the one-hot formula; the score at an offset
// is the number of agreeing positions. Ties go to the rightmost offset. A
// leaf that is empty or longer than f has no valid offset and agreement 0.
MatchResult match_convolve(const Formula& f, const Formula& leaf);

// Replaces [position, position + |leaf|) by e.
Formula combine(const Formula& f, const Formula& leaf, const Formula& e, std::size_t position);

struct Selection {
  std::optional<LeafCandidate> chosen;
  std::vector<LeafCandidate> candidates;
};

// Highest-confidence candidate among those with agreement 1; earliest wins
// ties. nullopt when no candidate has agreement 1.
std::optional<std::size_t> arbitrate(const std::vector<LeafCandidate>& candidates);

// Seed of trial `trial` for input f under a run seed.
std::uint64_t trial_seed(const Formula& f, std::uint64_t run_seed, int trial);

Selection select(const Formula& f, const SelectorConfig& config, LeafSampler& sampler, std::uint64_t run_seed);

struct RunResult {
  std::optional<Formula> value;
  RunTrace trace;
};

RunResult run_nrs(const Formula& f, LeafSampler& selector, Solver& solver, const SelectorConfig& config,
                  std::uint64_t run_seed, std::optional<int> step_limit = std::nullopt);

}  // namespace nrs

#endif  // NRS_PIPELINE_NRS_HPP_
