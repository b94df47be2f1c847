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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "doctest.h"
#include "nrs/datagen/dataset.hpp"
#include "nrs/datagen/generator.hpp"
#include "nrs/term/rewrite.hpp"

using namespace nrs;

namespace {

SplitSpec small_spec() {
  SplitSpec s;
  s.train_per_nesting = 400;
  s.id_val_per_nesting = 30;
  s.ood_val_per_nesting = 40;
  s.solver_train = 400;
  s.solver_val = 100;
  return s;
}

// Checks the two-nesting-points shape level by level.
bool two_nesting_points(const Term& root, int nesting) {
  std::vector<const Term*> level{&root};
  for (int depth = 0; depth < nesting; ++depth) {
    std::vector<const Term*> next;
    for (const Term* node : level) {
      if (node->is_atomic()) return false;
      for (const Term& a : node->args) {
        if (!a.is_atomic()) next.push_back(&a);
      }
    }
    const std::size_t want = depth == nesting - 1 ? 0 : 2;
    if (next.size() != want) return false;
    level = std::move(next);
  }
  return true;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("generator shape and determinism") {
  for (Domain d : kAllDomains) {
    for (int nesting = 1; nesting <= DomainSpec::of(d).test_nesting_ceiling; ++nesting) {
      for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Term t = generate_term({d, nesting, seed});
        CHECK(two_nesting_points(t, nesting));
        CHECK(nesting_depth(t) == nesting);
      }
    }
    CHECK(generate_formula({d, 0, 3}).is_atomic());
    CHECK(generate_formula({d, 2, 77}) == generate_formula({d, 2, 77}));
  }
  Formula logic5 = generate_formula({Domain::logic, 5, 1});
  CHECK(nesting_depth(logic5) == 5);
  CHECK(reduce_fully(logic5).value.is_atomic());
}

TEST_CASE("listops argument counts are configurable") {
  GenSpec g{Domain::listops, 3, 5, 3, 5};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    g.seed = seed;
    Term t = generate_term(g);
    std::vector<const Term*> stack{&t};
    while (!stack.empty()) {
      const Term* n = stack.back();
      stack.pop_back();
      if (n->is_atomic()) continue;
      CHECK(n->args.size() >= 3);
      CHECK(n->args.size() <= 5);
      for (const auto& a : n->args) stack.push_back(&a);
    }
  }
}

TEST_CASE("selector record targets") {
  SelectorInputs in;
  in.train = {parse("(12+(3-(4+5)))", Domain::arithmetic), parse("((1+2)*(3-4))", Domain::arithmetic),
              parse("9", Domain::arithmetic)};
  auto s2s = selector_records(in, Domain::arithmetic, SelectorMode::seq2seq);
  CHECK(s2s.train[0].target == "(4+5)");
  CHECK(s2s.train[1].target == "(3-4)");
  CHECK(s2s.train[2].target == "9");
  auto seg = selector_records(in, Domain::arithmetic, SelectorMode::segmentation);
  CHECK(seg.train[0].target == "0000001111100");
  CHECK(seg.train[1].target == "0111110111110");
  CHECK(seg.train[2].target == "1");
}

TEST_CASE("selector datasets respect their contracts") {
  for (Domain d : kAllDomains) {
    const SplitSpec spec = small_spec();
    SelectorInputs in = build_selector_inputs(d, spec, 123);
    auto s2s = selector_records(in, d, SelectorMode::seq2seq);
    auto seg = selector_records(in, d, SelectorMode::segmentation);
    auto test = test_records(in, d);

    std::set<std::string> seen;
    std::size_t total = 0;
    for (const auto* split : {&s2s.train, &s2s.id_val, &s2s.ood_val, &test}) {
      for (const auto& r : *split) {
        seen.insert(r.input);
        ++total;
      }
    }
    CHECK(seen.size() == total);

    std::set<int> train_depths;
    for (const auto& r : s2s.train) {
      train_depths.insert(r.nesting);
      CHECK(r.nesting <= 3);
      Formula f = parse(r.input, d);
      const LeafSpan last = find_leaf_spans(f).back();
      CHECK(r.target == render_tokens(d, last.tokens));
      CHECK(r.input.rfind(r.target) != std::string::npos);
    }
    CHECK(train_depths == std::set<int>{0, 1, 2, 3});

    std::map<int, int> ood;
    for (const auto& r : s2s.ood_val) ++ood[r.nesting];
    CHECK(ood == std::map<int, int>{{4, 40}, {5, 40}, {6, 40}});

    for (const auto& r : seg.train) {
      Formula f = parse(r.input, d);
      REQUIRE(r.target.size() == f.size());
      // Positive runs, cut where a closing bracket meets an opening one
      // (adjacent ListOps leaves), are exactly leaf formulas or the atom.
      std::size_t i = 0;
      while (i < f.size()) {
        if (r.target[i] == '0') {
          ++i;
          continue;
        }
        std::size_t j = i + 1;
        while (j < f.size() && r.target[j] == '1' && !(f[j - 1] == "]" && f[j] == "[")) ++j;
        Formula run = f.slice(i, j);
        CHECK((is_leaf_formula(run) || (run.is_atomic() && run.size() == f.size())));
        i = j;
      }
    }

    std::map<int, int> per;
    for (const auto& r : test) {
      ++per[r.nesting];
      CHECK(r.target == reduce_fully(parse(r.input, d)).value.render());
    }
    CHECK(static_cast<int>(per.size()) == DomainSpec::of(d).test_nesting_ceiling);
    for (auto [n, c] : per) CHECK(c == 100);
  }
}

TEST_CASE("test set sizes") {
  CHECK(build_test_set(Domain::logic, small_spec(), 1).size() == 1200);
  CHECK(build_test_set(Domain::arithmetic, small_spec(), 1).size() == 600);
  // The test stream does not depend on the development split sizes.
  SplitSpec other = small_spec();
  other.train_per_nesting = 50;
  CHECK(build_test_set(Domain::listops, small_spec(), 4) == build_test_set(Domain::listops, other, 4));
}

TEST_CASE("solver datasets") {
  SolverDataset logic = build_solver_dataset(Domain::logic, small_spec(), 3);
  const std::size_t all = logic.train.size() + logic.id_val.size();
  CHECK(all == enumerate_logic_leaves().size() + enumerate_atoms(Domain::logic).size());
  CHECK(enumerate_logic_leaves().size() == 270);
  std::set<std::string> train_inputs;
  for (const auto& r : logic.train) train_inputs.insert(r.input);
  for (const auto& r : logic.id_val) CHECK(train_inputs.count(r.input) == 0);
  for (const auto& r : logic.train) {
    if (r.input == "True") CHECK(r.target == kOmega);
  }
  SolverDataset arith = build_solver_dataset(Domain::arithmetic, small_spec(), 3);
  bool saw_leaf = false;
  for (const auto& r : arith.train) {
    Formula f = parse(r.input, Domain::arithmetic);
    CHECK(r.target == apply_rule(f).render());
    saw_leaf = saw_leaf || !f.is_atomic();
  }
  CHECK(saw_leaf);
  Formula four_five = parse("(4+5)", Domain::arithmetic);
  CHECK(apply_rule(four_five).render() == "9");
}

TEST_CASE("batch composer is uniform over groups") {
  std::vector<std::vector<std::size_t>> groups{{0}, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, {11, 12}, {13, 14, 15}};
  BatchComposer bc(groups, 9);
  const int batches = 10000;
  std::vector<int> counts(4, 0);
  for (int b = 0; b < batches; ++b) {
    for (std::size_t i : bc.batch(static_cast<std::uint64_t>(b), 1)) ++counts[bc.group_of(i)];
  }
  for (int c : counts) {
    const double sigma = std::sqrt(batches * 0.25 * 0.75);
    CHECK(std::abs(c - batches * 0.25) <= 3 * sigma);
  }
  CHECK(bc.batch(17, 8) == bc.batch(17, 8));
}

TEST_CASE("solver batches mix leaves and atoms evenly") {
  SolverDataset arith = build_solver_dataset(Domain::arithmetic, small_spec(), 3);
  BatchComposer bc = BatchComposer::solver_mix(arith.train, 5);
  CHECK(bc.group_count() == 2);
  long omega = 0, total = 0;
  for (int b = 0; b < 1000; ++b) {
    for (std::size_t i : bc.batch(static_cast<std::uint64_t>(b), 32)) {
      omega += arith.train[i].target == kOmega;
      ++total;
    }
  }
  const double sigma = std::sqrt(total * 0.25);
  CHECK(std::abs(omega - total * 0.5) <= 3 * sigma);
}

TEST_CASE("jsonl round-trip and byte-identical reruns") {
  const auto dir = std::filesystem::temp_directory_path() / "nrs_datagen_test";
  std::filesystem::remove_all(dir);
  SplitSpec spec = small_spec();
  write_datasets(generate_datasets({Domain::arithmetic}, 11, false, &spec), dir / "a");
  write_datasets(generate_datasets({Domain::arithmetic}, 11, false, &spec), dir / "b");
  for (const auto& entry : std::filesystem::directory_iterator(dir / "a")) {
    CHECK(slurp(entry.path()) == slurp(dir / "b" / entry.path().filename()));
  }
  auto records = read_jsonl(dir / "a" / "test.jsonl");
  CHECK(records.size() == 600);
  write_jsonl(dir / "c.jsonl", records);
  CHECK(slurp(dir / "c.jsonl") == slurp(dir / "a" / "test.jsonl"));
  const std::string first = slurp(dir / "a" / "test.jsonl").substr(0, 9);
  CHECK(first == "{\"input\":");
  Manifest m = Manifest::read(dir / "a" / "manifest.txt");
  CHECK(m.get_int("arithmetic.test.count") == 600);
  CHECK(m.get_int("format_version") == kDatasetFormatVersion);
  std::filesystem::remove_all(dir);
}

TEST_CASE("multi-domain generation covers all domains") {
  SplitSpec spec = small_spec();
  DatagenOutput out = generate_datasets(std::vector<Domain>(kAllDomains.begin(), kAllDomains.end()), 2, true, &spec);
  for (const auto& [name, records] : out.files) {
    if (name != "test") continue;
    std::set<Domain> domains;
    for (const auto& r : records) domains.insert(r.domain);
    CHECK(domains.size() == 4);
    CHECK(records.size() == 1200 + 3 * 600);
  }
  CHECK(out.manifest.get_bool("multi_domain"));
}
