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


#include "nrs/pipeline/stubs.hpp"

#include <algorithm>

#include "nrs/datagen/dataset.hpp"
#include "nrs/datagen/generator.hpp"
#include "nrs/term/rewrite.hpp"

namespace nrs {
namespace {

bool opens_bracket(const std::string& t) { return t == "(" || (!t.empty() && t[0] == '['); }

bool occurs_in(const Formula& f, const Formula& part) {
  return std::search(f.tokens().begin(), f.tokens().end(), part.tokens().begin(), part.tokens().end()) !=
         f.tokens().end();
}

}  // namespace

std::vector<SelectorSample> OracleSampler::sample(const std::vector<Formula>& inputs,
                                                  const std::vector<std::uint64_t>&) {
  std::vector<SelectorSample> out;
  for (const auto& f : inputs) {
    auto spans = find_leaf_spans(f);
    if (spans.empty()) {
      out.push_back({f, 1.0});
    } else {
      out.push_back({Formula(f.domain(), spans.back().tokens), 1.0});
    }
  }
  return out;
}

std::vector<std::vector<int>> OracleSegmenter::segment(const std::vector<Formula>& inputs,
                                                       const std::vector<std::uint64_t>&) {
  std::vector<std::vector<int>> out;
  for (const auto& f : inputs) {
    std::vector<int> mask;
    for (char c : segmentation_target(f)) mask.push_back(c == '1');
    out.push_back(std::move(mask));
  }
  return out;
}

std::vector<SolverOutput> OracleSolver::solve(const std::vector<Formula>& leaves) {
  std::vector<SolverOutput> out;
  for (const auto& leaf : leaves) {
    try {
      out.push_back({apply_rule(leaf), 0.0});
    } catch (const MalformedLeaf&) {
      out.push_back({Formula(leaf.domain(), {"?"}), kNoConfidence});
    }
  }
  return out;
}

std::vector<SolverOutput> WrongSolver::solve(const std::vector<Formula>& leaves) {
  std::vector<SolverOutput> out = OracleSolver().solve(leaves);
  for (auto& o : out) {
    if (!o.value.is_omega() && o.log_confidence == 0.0) o.value = other_atom(o.value);
  }
  return out;
}

std::vector<SelectorSample> AbsentSampler::sample(const std::vector<Formula>& inputs,
                                                  const std::vector<std::uint64_t>&) {
  std::vector<SelectorSample> out;
  for (const auto& f : inputs) {
    // Swap the last value token of the last leaf; if that still occurs
    // somewhere, fall back to a sequence longer than f.
    auto spans = find_leaf_spans(f);
    std::vector<std::string> toks = spans.empty() ? f.tokens() : spans.back().tokens;
    for (auto it = toks.rbegin(); it != toks.rend(); ++it) {
      if (classify_token(f.domain(), *it) == TokenKind::value) {
        Formula swapped = other_atom(Formula(f.domain(), {*it}));
        if (swapped.size() == 1) *it = swapped[0];
        break;
      }
    }
    Formula candidate(f.domain(), toks);
    if (occurs_in(f, candidate)) {
      std::vector<std::string> longer(f.tokens());
      longer.push_back(f.tokens().empty() ? "(" : f.tokens().back());
      candidate = Formula(f.domain(), longer);
    }
    out.push_back({candidate, 1.0});
  }
  return out;
}

std::pair<std::size_t, std::size_t> invalid_span(const Formula& f) {
  if (f.is_atomic()) return {0, f.size()};
  const LeafSpan leaf = last_leaf(f);
  if (leaf.end < f.size() && !opens_bracket(f[leaf.end])) return {leaf.start, leaf.end + 1};
  if (leaf.start > 0) return {leaf.start - 1, leaf.end};
  return {leaf.start, leaf.end - 1};
}

std::vector<SelectorSample> InvalidSpanSampler::sample(const std::vector<Formula>& inputs,
                                                       const std::vector<std::uint64_t>&) {
  std::vector<SelectorSample> out;
  for (const auto& f : inputs) {
    auto [start, end] = invalid_span(f);
    out.push_back({f.slice(start, end), 1.0});
  }
  return out;
}

std::vector<std::vector<int>> InvalidMaskSegmenter::segment(const std::vector<Formula>& inputs,
                                                            const std::vector<std::uint64_t>&) {
  std::vector<std::vector<int>> out;
  for (const auto& f : inputs) {
    std::vector<int> mask(f.size(), 0);
    auto [start, end] = invalid_span(f);
    std::fill(mask.begin() + static_cast<std::ptrdiff_t>(start), mask.begin() + static_cast<std::ptrdiff_t>(end), 1);
    out.push_back(std::move(mask));
  }
  return out;
}

Formula other_atom(const Formula& value) {
  for (const auto& atom : enumerate_atoms(value.domain())) {
    if (!(atom == value)) return atom;
  }
  return Formula(value.domain(), {"?"});
}

}  // namespace nrs
