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

#ifndef NRS_TERM_REWRITE_HPP_
#define NRS_TERM_REWRITE_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nrs/term/formula.hpp"

namespace nrs {

// [start, end) of a leaf formula (or of a whole atomic formula).
struct LeafSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::vector<std::string> tokens;

  std::size_t length() const { return end - start; }
  friend bool operator==(const LeafSpan&, const LeafSpan&) = default;
};

class MalformedLeaf : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StepLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Innermost bracketed sub-formulas, left to right. An atomic formula yields
// one span covering it.
std::vector<LeafSpan> find_leaf_spans(const Formula& formula);

// True if the formula is a well-formed operator application over atoms.
bool is_leaf_formula(const Formula& formula);

// Ground-truth rewriting rule. Maps a leaf formula to its atomic value, and
// an atomic element to ω. Throws MalformedLeaf for anything else, including
// leaves without an applicable rule (e.g. conjunction of two distinct logic
// literals).
Formula apply_rule(const Formula& leaf);

// Value of an operator application whose arguments are atomic terms, or
// nullopt when no rule applies.
std::optional<std::vector<std::string>> evaluate_leaf(const Term& leaf, Domain domain);

// Replaces tokens [start, end) of the formula.
Formula splice(const Formula& formula, std::size_t start, std::size_t end,
               const Formula& replacement);

// 4 × operators + 4.
int default_step_limit(const Formula& formula);

struct Reduction {
  Formula value;
  // Formula after each rewrite; empty for atomic inputs.
  std::vector<Formula> steps;
};

// Rewrites the last leaf span until the formula is atomic.
// Throws StepLimitExceeded or MalformedLeaf.
Reduction reduce_fully(const Formula& formula, std::optional<int> step_limit = std::nullopt);

// Truncated remainder: keeps the dividend's sign, |result| < modulus.
constexpr long long truncated_mod(long long value, long long modulus) { return value % modulus; }

}  // namespace nrs

#endif  // NRS_TERM_REWRITE_HPP_
