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


#include "nrs/eval/report.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nrs {

std::string accuracy_csv(const Metrics& m) {
  std::ostringstream os;
  os << "domain,nesting,total,correct,accuracy\n";
  for (const auto& [key, c] : m.cells) {
    os << domain_name(key.first) << ',' << key.second << ',' << c.total << ',' << c.correct << ','
       << format_double(c.accuracy()) << '\n';
  }
  return os.str();
}

std::string errors_csv(const Metrics& m) {
  std::ostringstream os;
  os << "domain,nesting,failed";
  for (ErrorClass cls : kErrorClasses) os << ',' << error_class_name(cls);
  os << '\n';
  for (const auto& [key, c] : m.cells) {
    os << domain_name(key.first) << ',' << key.second << ',' << c.total - c.correct;
    for (ErrorClass cls : kErrorClasses) {
      auto it = c.errors.find(cls);
      os << ',' << (it == c.errors.end() ? 0 : it->second);
    }
    os << '\n';
  }
  return os.str();
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

void write_report(const Evaluation& e, const std::filesystem::path& dir, const Manifest& extra) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  write_file(dir / "accuracy.csv", accuracy_csv(e.metrics));
  write_file(dir / "errors.csv", errors_csv(e.metrics));
  std::string traces;
  for (const auto& r : e.records) traces += eval_record_to_json(r) + '\n';
  write_file(dir / "traces.jsonl", traces);

  Manifest m;
  m.set("engine", e.engine);
  m.set("seed", std::to_string(e.seed));
  const Cell all = e.metrics.aggregate();
  m.set("records", all.total);
  m.set("accuracy", all.accuracy());
  for (ErrorClass cls : kErrorClasses) {
    auto it = all.errors.find(cls);
    m.set("errors." + std::string(error_class_name(cls)), it == all.errors.end() ? 0 : it->second);
  }
  m.merge(extra);
  m.write(dir / "manifest.txt");
}

std::vector<EvalRecord> read_traces(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<EvalRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(eval_record_from_json(line));
  }
  return out;
}

}  // namespace nrs
