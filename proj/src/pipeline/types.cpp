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

#include "nrs/pipeline/types.hpp"

#include <stdexcept>

#include "json.hpp"

namespace nrs {

using Json = nlohmann::ordered_json;

std::string_view run_status_name(RunStatus status) {
  switch (status) {
    case RunStatus::completed: return "completed";
    case RunStatus::no_candidate: return "no_candidate";
    case RunStatus::no_replacement: return "no_replacement";
    case RunStatus::step_limit: return "step_limit";
  }
  return "?";
}

RunStatus parse_run_status(std::string_view name) {
  for (RunStatus s : {RunStatus::completed, RunStatus::no_candidate, RunStatus::no_replacement, RunStatus::step_limit}) {
    if (run_status_name(s) == name) return s;
  }
  throw std::invalid_argument("unknown run status: " + std::string(name));
}

namespace {

Json candidate_json(const CandidateRecord& c) {
  return Json{{"tokens", c.tokens}, {"confidence", c.confidence}, {"agreement", c.agreement},
              {"window_offset", c.window_offset}};
}

CandidateRecord candidate_from(const Json& j) {
  return CandidateRecord{j.at("tokens").get<std::string>(), j.at("confidence").get<double>(),
                         j.at("agreement").get<double>(), j.at("window_offset").get<std::size_t>()};
}

}  // namespace

std::string trace_to_json(const RunTrace& t) {
  Json j;
  j["engine"] = t.engine;
  j["domain"] = domain_name(t.domain);
  j["input"] = t.input;
  j["status"] = run_status_name(t.status);
  j["final_output"] = t.final_output ? Json(*t.final_output) : Json(nullptr);
  Json steps = Json::array();
  for (const TraceStep& s : t.steps) {
    Json step;
    step["step"] = s.index;
    step["input"] = s.input;
    if (t.engine == "nrs") {
      Json cands = Json::array();
      for (const auto& c : s.candidates) cands.push_back(candidate_json(c));
      step["candidates"] = cands;
      step["candidate"] = s.chosen ? candidate_json(*s.chosen) : Json(nullptr);
      step["position"] = s.position;
    } else {
      step["mask"] = s.mask;
      Json leaves = Json::array();
      for (const auto& l : s.leaves) {
        leaves.push_back(Json{{"start", l.start}, {"end", l.end}, {"tokens", l.tokens}, {"output", l.output},
                              {"log_confidence", l.log_confidence}, {"replaced", l.replaced}});
      }
      step["leaves"] = leaves;
    }
    step["solver_output"] = s.solver_output;
    step["solver_log_confidence"] = s.solver_log_confidence;
    step["output"] = s.output;
    steps.push_back(std::move(step));
  }
  j["steps"] = std::move(steps);
  return j.dump();
}

RunTrace trace_from_json(std::string_view line) {
  const Json j = Json::parse(line);
  RunTrace t;
  t.engine = j.at("engine").get<std::string>();
  t.domain = parse_domain(j.at("domain").get<std::string>());
  t.input = j.at("input").get<std::string>();
  t.status = parse_run_status(j.at("status").get<std::string>());
  if (!j.at("final_output").is_null()) t.final_output = j.at("final_output").get<std::string>();
  for (const Json& s : j.at("steps")) {
    TraceStep step;
    step.index = s.at("step").get<int>();
    step.input = s.at("input").get<std::string>();
    if (t.engine == "nrs") {
      for (const Json& c : s.at("candidates")) step.candidates.push_back(candidate_from(c));
      if (!s.at("candidate").is_null()) step.chosen = candidate_from(s.at("candidate"));
      step.position = s.at("position").get<std::size_t>();
    } else {
      step.mask = s.at("mask").get<std::string>();
      for (const Json& l : s.at("leaves")) {
        step.leaves.push_back(LeafRecord{l.at("start").get<std::size_t>(), l.at("end").get<std::size_t>(),
                                         l.at("tokens").get<std::string>(), l.at("output").get<std::string>(),
                                         l.at("log_confidence").get<double>(), l.at("replaced").get<bool>()});
      }
    }
    step.solver_output = s.at("solver_output").get<std::string>();
    step.solver_log_confidence = s.at("solver_log_confidence").get<double>();
    step.output = s.at("output").get<std::string>();
    t.steps.push_back(std::move(step));
  }
  return t;
}

}  // namespace nrs
