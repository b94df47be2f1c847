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


#include "nrs/eval/evaluate.hpp"

#include <stdexcept>

#include "json.hpp"
#include "nrs/term/rewrite.hpp"
#include "nrs/util/random.hpp"

namespace nrs {

using Json = nlohmann::ordered_json;

RunResult NrsEngine::run(const Formula& f, std::uint64_t seed) {
  return run_nrs(f, selector_, solver_, config(f.domain()), seed);
}

SelectorConfig NrsEngine::config(Domain d) const {
  auto it = configs_.find(d);
  return it == configs_.end() ? SelectorConfig::defaults(d) : it->second;
}

RunResult FastNrsEngine::run(const Formula& f, std::uint64_t seed) {
  return run_fastnrs(f, selector_, solver_, policy(f.domain()), seed);
}

ReplacementPolicy FastNrsEngine::policy(Domain d) const {
  auto it = policies_.find(d);
  return it == policies_.end() ? ReplacementPolicy::defaults(d) : it->second;
}

std::string_view error_class_name(ErrorClass c) {
  switch (c) {
    case ErrorClass::missing: return "missing";
    case ErrorClass::malformed: return "malformed";
    case ErrorClass::solver: return "solver";
    case ErrorClass::timeout: return "timeout";
  }
  return "?";
}

ErrorClass parse_error_class(std::string_view name) {
  for (ErrorClass c : kErrorClasses) {
    if (error_class_name(c) == name) return c;
  }
  throw std::invalid_argument("unknown error class: " + std::string(name));
}

bool is_correct(const RunTrace& trace, std::string_view target) {
  return trace.status == RunStatus::completed && trace.final_output && *trace.final_output == target;
}

namespace {

bool is_leaf_span(const std::vector<LeafSpan>& spans, std::size_t start, std::size_t end) {
  for (const auto& s : spans) {
    if (s.start == start && s.end == end) return true;
  }
  return false;
}

std::string rule_output(const Formula& f, std::size_t start, std::size_t end) {
  return apply_rule(f.slice(start, end)).render();
}

}  // namespace

namespace {

std::optional<ErrorRecord> first_fault(const RunTrace& trace) {
  const bool fast = trace.engine == "fastnrs";
  for (const TraceStep& step : trace.steps) {
    Formula f;
    try {
      f = parse(step.input, trace.domain);
    } catch (const SyntaxError&) {
      return ErrorRecord{ErrorClass::malformed, step.index, step.input};
    }
    const std::vector<LeafSpan> spans = find_leaf_spans(f);

    if (!fast) {
      if (!step.chosen) {
        return ErrorRecord{ErrorClass::missing, step.index,
                           step.candidates.empty() ? std::string() : step.candidates.front().tokens};
      }
      std::optional<std::size_t> end;
      for (const auto& s : spans) {
        if (s.start == step.position && render_tokens(trace.domain, s.tokens) == step.chosen->tokens) end = s.end;
      }
      if (!end) return ErrorRecord{ErrorClass::malformed, step.index, step.chosen->tokens};
      if (step.solver_output != rule_output(f, step.position, *end)) {
        return ErrorRecord{ErrorClass::solver, step.index, step.chosen->tokens + " -> " + step.solver_output};
      }
      continue;
    }

    bool any_invalid = false;
    bool any_replaced = false;
    bool halted = false;
    for (const LeafRecord& leaf : step.leaves) {
      const bool omega = leaf.output == kOmega;
      const bool acted = leaf.replaced || omega;
      const bool valid = leaf.end <= f.size() && is_leaf_span(spans, leaf.start, leaf.end);
      any_replaced = any_replaced || leaf.replaced;
      halted = halted || omega;
      if (!valid) {
        any_invalid = true;
        if (acted) return ErrorRecord{ErrorClass::malformed, step.index, leaf.tokens};
        continue;
      }
      if (acted && leaf.output != rule_output(f, leaf.start, leaf.end)) {
        return ErrorRecord{ErrorClass::solver, step.index, leaf.tokens + " -> " + leaf.output};
      }
    }
    if (!any_replaced && !halted) {
      if (step.leaves.empty() || any_invalid) return ErrorRecord{ErrorClass::malformed, step.index, step.mask};
      return ErrorRecord{ErrorClass::solver, step.index, step.leaves.front().tokens};
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<ErrorRecord> classify_error(const RunTrace& trace, std::string_view target) {
  if (is_correct(trace, target)) return std::nullopt;
  const int n_steps = static_cast<int>(trace.steps.size());
  if (auto fault = first_fault(trace)) return fault;
  if (trace.status == RunStatus::step_limit) {
    return ErrorRecord{ErrorClass::timeout, n_steps, trace.steps.empty() ? trace.input : trace.steps.back().output};
  }
  return ErrorRecord{ErrorClass::solver, n_steps, trace.final_output.value_or("")};
}

Cell Metrics::aggregate() const {
  Cell out;
  for (const auto& [key, c] : cells) {
    out.total += c.total;
    out.correct += c.correct;
    for (const auto& [cls, n] : c.errors) out.errors[cls] += n;
  }
  return out;
}

Cell Metrics::aggregate(Domain d) const {
  Cell out;
  for (const auto& [key, c] : cells) {
    if (key.first != d) continue;
    out.total += c.total;
    out.correct += c.correct;
    for (const auto& [cls, n] : c.errors) out.errors[cls] += n;
  }
  return out;
}

Evaluation reclassify(std::string engine, std::uint64_t seed, std::vector<EvalRecord> records) {
  Evaluation out;
  out.engine = std::move(engine);
  out.seed = seed;
  for (auto& r : records) {
    r.error = classify_error(r.trace, r.target);
    Cell& cell = out.metrics.cells[{r.trace.domain, r.nesting}];
    ++cell.total;
    if (!r.error) {
      ++cell.correct;
    } else {
      ++cell.errors[r.error->cls];
    }
  }
  out.records = std::move(records);
  return out;
}

Evaluation evaluate(Engine& engine, const std::vector<DatasetRecord>& test_set, std::uint64_t seed) {
  std::vector<EvalRecord> records;
  records.reserve(test_set.size());
  for (std::size_t i = 0; i < test_set.size(); ++i) {
    const DatasetRecord& rec = test_set[i];
    RunResult r = engine.run(parse(rec.input, rec.domain), Rng::derive(seed, i));
    records.push_back(EvalRecord{rec.nesting, rec.target, std::move(r.trace), std::nullopt});
  }
  return reclassify(std::string(engine.name()), seed, std::move(records));
}

std::string eval_record_to_json(const EvalRecord& r) {
  Json j;
  j["nesting"] = r.nesting;
  j["target"] = r.target;
  j["correct"] = !r.error.has_value();
  if (r.error) {
    j["error"] = Json{{"class", error_class_name(r.error->cls)}, {"step", r.error->step}, {"payload", r.error->payload}};
  } else {
    j["error"] = nullptr;
  }
  j["trace"] = Json::parse(trace_to_json(r.trace));
  return j.dump();
}

EvalRecord eval_record_from_json(std::string_view line) {
  const Json j = Json::parse(line);
  EvalRecord r;
  r.nesting = j.at("nesting").get<int>();
  r.target = j.at("target").get<std::string>();
  r.trace = trace_from_json(j.at("trace").dump());
  if (!j.at("error").is_null()) {
    const Json& e = j.at("error");
    r.error = ErrorRecord{parse_error_class(e.at("class").get<std::string>()), e.at("step").get<int>(),
                          e.at("payload").get<std::string>()};
  }
  return r;
}

}  // namespace nrs
