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

#include "nrs/pipeline/nrs.hpp"

#include <stdexcept>

#include "nrs/term/rewrite.hpp"
#include "nrs/util/random.hpp"

namespace nrs {

std::optional<int> SelectorConfig::default_threshold(Domain domain) {
  switch (domain) {
    case Domain::listops: return 150;
    case Domain::algebra: return 150;
    case Domain::arithmetic: return 125;
    case Domain::logic: return std::nullopt;
  }
  return std::nullopt;
}

SelectorConfig SelectorConfig::defaults(Domain domain, int M) { return SelectorConfig{M, default_threshold(domain)}; }

Formula window(const Formula& f, std::size_t k) {
  if (k >= f.size()) throw std::out_of_range("window larger than formula");
  return f.slice(k, f.size());
}

std::size_t window_size(std::size_t length, int trial) {
  return length * static_cast<std::size_t>(trial % kWindowGroups) / kWindowGroups;
}

MatchResult match_convolve(const Formula& f, const Formula& leaf) {
  MatchResult best;
  const std::size_t n = f.size();
  const std::size_t m = leaf.size();
  if (m == 0 || m > n) return best;
  bool any = false;
  for (std::size_t o = 0; o + m <= n; ++o) {
    std::size_t score = 0;
    for (std::size_t i = 0; i < m; ++i) score += f[o + i] == leaf[i];
    if (!any || score >= best.score) {
      best.position = o;
      best.score = score;
      any = true;
    }
  }
  best.agreement = static_cast<double>(best.score) / static_cast<double>(m);
  return best;
}

Formula combine(const Formula& f, const Formula& leaf, const Formula& e, std::size_t position) {
  return splice(f, position, position + leaf.size(), e);
}

std::optional<std::size_t> arbitrate(const std::vector<LeafCandidate>& candidates) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].agreement != 1.0) continue;
    if (!best || candidates[i].confidence > candidates[*best].confidence) best = i;
  }
  return best;
}

std::uint64_t trial_seed(const Formula& f, std::uint64_t run_seed, int trial) {
  return Rng::derive(fnv1a(f.render(), run_seed ^ 0xCBF29CE484222325ULL), static_cast<std::uint64_t>(trial));
}

Selection select(const Formula& f, const SelectorConfig& config, LeafSampler& sampler, std::uint64_t run_seed) {
  if (config.M < 1) throw std::invalid_argument("M must be at least 1");
  const bool windowed = config.T && static_cast<int>(f.size()) >= *config.T;
  std::vector<Formula> inputs;
  std::vector<std::size_t> offsets;
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < config.M; ++i) {
    const std::size_t k = windowed ? window_size(f.size(), i) : 0;
    inputs.push_back(window(f, k));
    offsets.push_back(k);
    seeds.push_back(trial_seed(f, run_seed, i));
  }
  const std::vector<SelectorSample> samples = sampler.sample(inputs, seeds);
  Selection out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const MatchResult m = match_convolve(inputs[i], samples[i].tokens);
    out.candidates.push_back(
        LeafCandidate{samples[i].tokens, samples[i].confidence, m.agreement, offsets[i], m.position + offsets[i]});
  }
  if (auto best = arbitrate(out.candidates)) out.chosen = out.candidates[*best];
  return out;
}

namespace {

CandidateRecord record_of(const LeafCandidate& c) {
  return CandidateRecord{c.tokens.render(), c.confidence, c.agreement, c.window_offset};
}

}  // namespace

RunResult run_nrs(const Formula& input, LeafSampler& selector, Solver& solver, const SelectorConfig& config,
                  std::uint64_t run_seed, std::optional<int> step_limit) {
  RunResult out;
  out.trace.engine = "nrs";
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
    Selection sel = select(f, config, selector, Rng::derive(run_seed, static_cast<std::uint64_t>(step)));
    for (const auto& c : sel.candidates) ts.candidates.push_back(record_of(c));
    if (!sel.chosen) {
      ts.output = ts.input;
      out.trace.steps.push_back(std::move(ts));
      out.trace.status = RunStatus::no_candidate;
      return out;
    }
    ts.chosen = record_of(*sel.chosen);
    ts.position = sel.chosen->position;
    const SolverOutput e = solver.solve({sel.chosen->tokens}).front();
    ts.solver_output = e.value.render();
    ts.solver_log_confidence = e.log_confidence;
    if (e.value.is_omega()) {
      ts.output = ts.input;
      out.trace.steps.push_back(std::move(ts));
      out.trace.status = RunStatus::completed;
      out.trace.final_output = f.render();
      out.value = f;
      return out;
    }
    f = combine(f, sel.chosen->tokens, e.value, sel.chosen->position);
    ts.output = f.render();
    out.trace.steps.push_back(std::move(ts));
  }
}

}  // namespace nrs
