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


#ifndef NRS_PIPELINE_STUBS_HPP_
#define NRS_PIPELINE_STUBS_HPP_

#include <cstddef>
#include <utility>

#include "nrs/pipeline/types.hpp"

namespace nrs {

// Symbolic stand-ins for the neural modules. The oracles answer from the
// rewrite engine; the fault stubs inject one kind of error each.

class OracleSampler : public LeafSampler {
 public:
  // Last leaf of each input with confidence 1.
  std::vector<SelectorSample> sample(const std::vector<Formula>& inputs,
                                     const std::vector<std::uint64_t>& seeds) override;
};

class OracleSegmenter : public Segmenter {
 public:
  std::vector<std::vector<int>> segment(const std::vector<Formula>& inputs,
                                        const std::vector<std::uint64_t>& seeds) override;
};

class OracleSolver : public Solver {
 public:
  // apply_rule with log-confidence 0; "?" with kNoConfidence on malformed leaves.
  std::vector<SolverOutput> solve(const std::vector<Formula>& leaves) override;
};

// Correct on atoms (ω), wrong on every leaf formula.
class WrongSolver : public Solver {
 public:
  std::vector<SolverOutput> solve(const std::vector<Formula>& leaves) override;
};

// Emits a sequence that does not occur in the input.
class AbsentSampler : public LeafSampler {
 public:
  std::vector<SelectorSample> sample(const std::vector<Formula>& inputs,
                                     const std::vector<std::uint64_t>& seeds) override;
};

// Emits a contiguous span of the input that is not a leaf formula.
class InvalidSpanSampler : public LeafSampler {
 public:
  std::vector<SelectorSample> sample(const std::vector<Formula>& inputs,
                                     const std::vector<std::uint64_t>& seeds) override;
};

// Marks only a span that is not a leaf formula.
class InvalidMaskSegmenter : public Segmenter {
 public:
  std::vector<std::vector<int>> segment(const std::vector<Formula>& inputs,
                                        const std::vector<std::uint64_t>& seeds) override;
};

// The last leaf widened by one token (right if that does not start a new
// bracket, else left), or shortened by one when it covers the whole formula.
// Returns the whole formula for atoms.
std::pair<std::size_t, std::size_t> invalid_span(const Formula& f);

// An atomic value of the domain different from the given one.
Formula other_atom(const Formula& value);

}  // namespace nrs

#endif  // NRS_PIPELINE_STUBS_HPP_
