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

#ifndef NRS_DATAGEN_GENERATOR_HPP_
#define NRS_DATAGEN_GENERATOR_HPP_

#include <cstdint>
#include <vector>

#include "nrs/term/formula.hpp"
#include "nrs/util/random.hpp"

namespace nrs {

struct GenSpec {
  Domain domain = Domain::logic;
  int nesting = 1;
  std::uint64_t seed = 0;
  // Argument count range for ListOps operators; nesting points occupy
  // argument slots.
  int listops_min_args = 2;
  int listops_max_args = 2;
};

// Random formula of exactly the requested nesting depth. Every level above
// the deepest has exactly two formula-valued arguments in total; the first
// level has a single formula. For logic the value of every sub-formula is
// chosen first and arguments are drawn to produce it, so every generated
// formula reduces to an atomic element.
Term generate_term(const GenSpec& spec);
Formula generate_formula(const GenSpec& spec);

// Random atomic element.
std::vector<std::string> random_atom(Domain domain, Rng& rng);

// Every logic leaf formula with an applicable rule, plus every atom.
std::vector<Formula> enumerate_logic_leaves();
std::vector<Formula> enumerate_atoms(Domain domain);

}  // namespace nrs

#endif  // NRS_DATAGEN_GENERATOR_HPP_
