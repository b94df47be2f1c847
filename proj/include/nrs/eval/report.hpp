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


#ifndef NRS_EVAL_REPORT_HPP_
#define NRS_EVAL_REPORT_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "nrs/eval/evaluate.hpp"
#include "nrs/util/manifest.hpp"

namespace nrs {

// Columns domain, nesting, total, correct, accuracy.
std::string accuracy_csv(const Metrics& m);
// Columns domain, nesting, failed, then one count per error class.
std::string errors_csv(const Metrics& m);

// Writes accuracy.csv, errors.csv, traces.jsonl and manifest.txt into dir.
// The manifest records engine, seed and aggregate accuracy on top of the
// caller's entries (checkpoints, thresholds). Throws std::runtime_error when
// dir cannot be written.
void write_report(const Evaluation& e, const std::filesystem::path& dir, const Manifest& extra = {});

std::vector<EvalRecord> read_traces(const std::filesystem::path& path);

}  // namespace nrs

#endif  // NRS_EVAL_REPORT_HPP_
