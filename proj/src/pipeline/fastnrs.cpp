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

#include "nrs/pipeline/fastnrs.hpp"

#include <stdexcept>

#include "nrs/term/rewrite.hpp"
#include "nrs/util/random.hpp"

namespace nrs {

double ReplacementPolicy::default_threshold(Domain domain) {
  switch (domain) {
    case Domain::listops: return -6.0;
    case Domain::arithmetic: return -2.0;
    case Domain::algebra: return -3.0;
    case Domain::logic: return -0.005;
  }
  return 0.0;
}

std::vector<int> segment(const Formula& f, Segmenter& segmenter, std::uint64_t seed) {
  std::vector<int> mask = segmenter.segment({f}, {seed}).front();
  if (mask.size() != f.size()) throw std::logic_error("segmenter returned a mask of the wrong length");
  return mask;
}

namespace {

bool is_close(const std::string& t) { return t == ")" || t == "]"; }
bool is_open(const std::string& t) { return t == "(" || t == "["; }

}  // namespace

std::vector<ExtractedLeaf> extract(const std::vector<int>& mask, const Formula& f) {
  if (mask.size() != f.size()) throw std::invalid_argument("mask length differs from formula length");
  std::vector<ExtractedLeaf> out;
  std::size_t i = 0;
  while (i < f.size()) {
    if (!mask[i]) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < f.size() && mask[j] && !(is_close(f[j - 1]) && is_open(f[j]))) ++j;
    out.push_back(ExtractedLeaf{i, j, f.slice(i, j)});
    i = j;
  }
  return out;
}

SolverOutput solve_leaf(const Formula& leaf, Solver& solver) { return solver.solve({leaf}).front(); }

std::pair<Formula, bool> cond_repl(const Formula& f, const ExtractedLeaf& leaf, const Formula& e, double c_e,
                                   const ReplacementPolicy& policy) {
  if (c_e >= policy.theta) return {splice(f, leaf.start, leaf.end, e), true};
  return {f, false};
}

RunResult run_fastnrs(const Formula& input, Segmenter& selector, Solver& solver, const ReplacementPolicy& policy,
                      std::uint64_t run_seed, std::optional<int> step_limit) {
  RunResult out;
  out.trace.engine = "fastnrs";
  out.trace.domain = input.domain();
  out.trace.input = input.render();
  const int limit = step_limit.value_or(default_step_limit(input));
  Formula f = input;
  for (int step = 0;; ++step) {
    if (step >= limit) {
      out.trace.status = RunStatus::step_limit;
      return out;
    }
    TraceStep ts;
    ts.index = step;
    ts.input = f.render();
    const std::vector<int> mask = segment(f, selector, Rng::derive(run_seed, static_cast<std::uint64_t>(step)));
    for (int b : mask) ts.mask += b ? '1' : '0';
    const std::vector<ExtractedLeaf> leaves = extract(mask, f);

    std::vector<Formula> leaf_tokens;
    for (const auto& l : leaves) leaf_tokens.push_back(l.tokens);
    const std::vector<SolverOutput> outputs = leaf_tokens.empty() ? std::vector<SolverOutput>{}
                                                                  : solver.solve(leaf_tokens);
    bool replaced = false;
    // Spans are in the coordinates of the iteration's input; delta tracks
    // how far earlier replacements shifted them.
    std::ptrdiff_t delta = 0;
    for (std::size_t k = 0; k < leaves.size(); ++k) {
      const SolverOutput& e = outputs[k];
      LeafRecord rec{leaves[k].start, leaves[k].end, leaves[k].tokens.render(), e.value.render(), e.log_confidence,
                     false};
      if (e.value.is_omega()) {
        ts.leaves.push_back(std::move(rec));
        ts.output = f.render();
        out.trace.steps.push_back(std::move(ts));
        out.trace.status = RunStatus::completed;
        out.trace.final_output = f.render();
        out.value = f;
        return out;
      }
      ExtractedLeaf moved = leaves[k];
      moved.start = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(moved.start) + delta);
      moved.end = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(moved.end) + delta);
      auto [next, did] = cond_repl(f, moved, e.value, e.log_confidence, policy);
      if (did) {
        delta += static_cast<std::ptrdiff_t>(e.value.size()) - static_cast<std::ptrdiff_t>(moved.end - moved.start);
        f = std::move(next);
        replaced = true;
      }
      rec.replaced = did;
      ts.leaves.push_back(std::move(rec));
    }
    ts.output = f.render();
    out.trace.steps.push_back(std::move(ts));
    if (!replaced) {
      out.trace.status = RunStatus::no_replacement;
      return out;
    }
  }
}

}  // namespace nrs
