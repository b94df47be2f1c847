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

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "nrs/datagen/generator.hpp"
#include "nrs/term/formula.hpp"
#include "nrs/term/rewrite.hpp"
#include "nrs/term/vocabulary.hpp"

using namespace nrs;

namespace {

// Independent tree evaluator, written against the rule statements rather
// than the rewriter.
std::string oracle_value(const Term& t, Domain d) {
  if (t.is_atomic()) {
    std::string s;
    for (const auto& tok : t.value) s += tok;
    return s;
  }
  std::vector<std::string> v;
  for (const auto& a : t.args) v.push_back(oracle_value(a, d));
  switch (d) {
    case Domain::logic: {
      if (t.op == "NOT") return v[0] == "True" ? "False" : "True";
      const std::string zero = t.op == "AND" ? "False" : "True";
      const std::string one = t.op == "AND" ? "True" : "False";
      if (v[0] == zero || v[1] == zero) return zero;
      if (v[0] == one) return v[1];
      return v[0];
    }
    case Domain::listops: {
      std::vector<long> xs;
      for (const auto& s : v) xs.push_back(std::stol(s));
      if (t.op == "MIN") return std::to_string(*std::min_element(xs.begin(), xs.end()));
      if (t.op == "MAX") return std::to_string(*std::max_element(xs.begin(), xs.end()));
      long sum = 0;
      for (long x : xs) sum += x;
      return std::to_string(sum % 10);
    }
    case Domain::arithmetic: {
      const __int128 a = std::stol(v[0]);
      const __int128 b = std::stol(v[1]);
      const __int128 r = t.op == "+" ? a + b : t.op == "-" ? a - b : a * b;
      // Truncated remainder, sign of the dividend.
      const __int128 m = r < 0 ? -((-r) % 100) : r % 100;
      return std::to_string(static_cast<long>(m));
    }
    case Domain::algebra: {
      auto split = [](const std::string& s) {
        const auto star = s.find('*');
        return std::make_pair(std::stol(s.substr(0, star)), s.substr(star));
      };
      auto [ca, va] = split(v[0]);
      auto [cb, vb] = split(v[1]);
      REQUIRE(va == vb);
      const long r = t.op == "+" ? ca + cb : ca - cb;
      const long m = r < 0 ? -((-r) % 100) : r % 100;
      return std::to_string(m) + va;
    }
  }
  return {};
}

std::string joined(const Formula& f) {
  std::string s;
  for (const auto& t : f.tokens()) s += t;
  return s;
}

// Every atomic normal form reachable by rewriting leaf spans in any order.
void reachable_values(const Formula& f, std::map<std::string, std::set<std::string>>& memo,
                      std::set<std::string>& out) {
  const std::string key = f.render();
  if (auto it = memo.find(key); it != memo.end()) {
    out.insert(it->second.begin(), it->second.end());
    return;
  }
  std::set<std::string> mine;
  if (f.is_atomic()) {
    mine.insert(key);
  } else {
    for (const LeafSpan& s : find_leaf_spans(f)) {
      Formula leaf(f.domain(), s.tokens);
      reachable_values(splice(f, s.start, s.end, apply_rule(leaf)), memo, mine);
    }
  }
  memo[key] = mine;
  out.insert(mine.begin(), mine.end());
}

}  // namespace

TEST_CASE("parse examples") {
  Formula f = parse("(12+(3-(4+5)))", Domain::arithmetic);
  CHECK(f.size() == 13);
  CHECK(f.render() == "(12+(3-(4+5)))");
  Formula atom = parse("9", Domain::arithmetic);
  CHECK(atom.size() == 1);
  CHECK(atom.is_atomic());
  Formula l = parse("[MIN[SM54][MIN39]]", Domain::listops);
  CHECK(is_well_formed(l));
  CHECK(l.render() == "[MIN[SM54][MIN39]]");
  Formula g = parse("(z AND (NOT True))", Domain::logic);
  CHECK(g.render() == "(z AND (NOT True))");
  CHECK(parse("( z   AND(NOT True) )", Domain::logic).render() == "(z AND (NOT True))");
  CHECK(parse("(-3*a*x+4*a*x)", Domain::algebra).size() == 13);
  CHECK(parse("(3--4)", Domain::arithmetic).tokens() == std::vector<std::string>{"(", "3", "-", "-4", ")"});
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse("(4+5", Domain::arithmetic), SyntaxError);
  CHECK_THROWS_AS(parse("(4+5))", Domain::arithmetic), SyntaxError);
  CHECK_THROWS_AS(parse("(4+$)", Domain::arithmetic), SyntaxError);
  CHECK_THROWS_AS(parse("(4+100)", Domain::arithmetic), SyntaxError);
  // ListOps arity is a generation parameter; only empty lists are rejected.
  CHECK_THROWS_AS(parse("[MIN]", Domain::listops), SyntaxError);
  CHECK(is_well_formed(parse("[SM123]", Domain::listops)));
  CHECK_THROWS_AS(parse("(3*a+4*b)", Domain::algebra), SyntaxError);
  CHECK_THROWS_AS(parse("(a AND b AND c)", Domain::logic), SyntaxError);
  try {
    parse("(4+$)", Domain::arithmetic);
  } catch (const SyntaxError& e) {
    CHECK(e.position() == 3);
  }
}

TEST_CASE("leaf spans") {
  auto spans = find_leaf_spans(parse("(12+(3-(4+5)))", Domain::arithmetic));
  REQUIRE(spans.size() == 1);
  CHECK(render_tokens(Domain::arithmetic, spans[0].tokens) == "(4+5)");
  spans = find_leaf_spans(parse("((1+2)*(3-4))", Domain::arithmetic));
  REQUIRE(spans.size() == 2);
  CHECK(render_tokens(Domain::arithmetic, spans[0].tokens) == "(1+2)");
  CHECK(render_tokens(Domain::arithmetic, spans[1].tokens) == "(3-4)");
  spans = find_leaf_spans(parse("z", Domain::logic));
  REQUIRE(spans.size() == 1);
  CHECK(spans[0].start == 0);
  CHECK(spans[0].end == 1);
}

TEST_CASE("apply_rule examples") {
  CHECK(apply_rule(parse("(4+5)", Domain::arithmetic)).render() == "9");
  CHECK(apply_rule(parse("9", Domain::arithmetic)).is_omega());
  CHECK(apply_rule(parse("(77*81)", Domain::arithmetic)).render() == "37");
  CHECK(apply_rule(parse("(-77*81)", Domain::arithmetic)).render() == "-37");
  CHECK(apply_rule(parse("(23*a*b-5*a*b)", Domain::algebra)).render() == "18*a*b");
  CHECK(apply_rule(parse("[SM54]", Domain::listops)).render() == "9");
  CHECK(apply_rule(parse("[SM99]", Domain::listops)).render() == "8");
  CHECK(apply_rule(parse("(z AND True)", Domain::logic)).render() == "z");
  CHECK(apply_rule(parse("(z OR z)", Domain::logic)).render() == "z");
  CHECK(apply_rule(parse("(NOT False)", Domain::logic)).render() == "True");
  CHECK_THROWS_AS(apply_rule(parse("(a AND b)", Domain::logic)), MalformedLeaf);
  CHECK_THROWS_AS(apply_rule(parse("(NOT a)", Domain::logic)), MalformedLeaf);
  CHECK_THROWS_AS(apply_rule(parse("(1+(2+3))", Domain::arithmetic)), MalformedLeaf);
  CHECK_THROWS_AS(apply_rule(Formula(Domain::arithmetic, {"4", "+", "5", ")"})), MalformedLeaf);
}

TEST_CASE("reduce_fully examples") {
  Reduction r = reduce_fully(parse("(12+(3-(4+5)))", Domain::arithmetic));
  REQUIRE(r.steps.size() == 3);
  CHECK(r.steps[0].render() == "(12+(3-9))");
  CHECK(r.steps[1].render() == "(12+-6)");
  CHECK(r.value.render() == "6");
  Reduction z = reduce_fully(parse("z", Domain::logic));
  CHECK(z.value.render() == "z");
  CHECK(z.steps.empty());
  Formula example = parse(
      "(((z OR (z OR (b AND False))) OR z) AND ((((j OR False) AND True) AND False) OR True))", Domain::logic);
  CHECK(nesting_depth(example) == 5);
  CHECK(reduce_fully(example).value.render() == "z");
  CHECK_THROWS_AS(reduce_fully(parse("((1+2)*(3-4))", Domain::arithmetic), 1), StepLimitExceeded);
}

TEST_CASE("oracle equivalence on random formulas") {
  for (Domain d : kAllDomains) {
    for (int i = 0; i < 10000; ++i) {
      const int nesting = i % 7;
      Term t = generate_term({d, nesting, Rng::derive(42, static_cast<std::uint64_t>(i))});
      Formula f = to_formula(t, d);
      CHECK(reduce_fully(f).value.render().size() > 0);
      const std::string expected = oracle_value(t, d);
      const std::string got = joined(reduce_fully(f).value);
      if (got != expected) {
        FAIL_CHECK(f.render() << " -> " << got << " expected " << expected);
      }
    }
  }
}

TEST_CASE("values are fixed points") {
  for (Domain d : kAllDomains) {
    for (int i = 0; i < 500; ++i) {
      Formula leaf = generate_formula({d, 1, Rng::derive(7, static_cast<std::uint64_t>(i))});
      Formula value = apply_rule(leaf);
      CHECK(value.is_atomic());
      CHECK(apply_rule(value).is_omega());
    }
  }
}

TEST_CASE("leaf spans re-parse as leaf formulas") {
  for (Domain d : kAllDomains) {
    for (int i = 0; i < 500; ++i) {
      Formula f = generate_formula({d, 1 + i % 6, Rng::derive(8, static_cast<std::uint64_t>(i))});
      for (const LeafSpan& s : find_leaf_spans(f)) {
        CHECK(s.start < s.end);
        CHECK(s.end <= f.size());
        Formula leaf = parse(render_tokens(d, s.tokens), d);
        CHECK(is_leaf_formula(leaf));
        CHECK(leaf.tokens() == f.slice(s.start, s.end).tokens());
      }
    }
  }
}

TEST_CASE("confluence over rewrite orders") {
  for (Domain d : kAllDomains) {
    for (int i = 0; i < 200; ++i) {
      Formula f = generate_formula({d, 1 + i % 4, Rng::derive(9, static_cast<std::uint64_t>(i))});
      std::map<std::string, std::set<std::string>> memo;
      std::set<std::string> values;
      reachable_values(f, memo, values);
      CHECK(values.size() == 1);
      CHECK(*values.begin() == reduce_fully(f).value.render());
    }
  }
}

TEST_CASE("render and parse round-trip") {
  for (Domain d : kAllDomains) {
    for (int i = 0; i < 300; ++i) {
      Formula f = generate_formula({d, i % 7, Rng::derive(10, static_cast<std::uint64_t>(i))});
      CHECK(parse(f.render(), d) == f);
      CHECK(to_formula(to_term(f), d) == f);
    }
  }
}

TEST_CASE("vocabularies") {
  for (Domain d : kAllDomains) {
    Vocabulary v = Vocabulary::formula_level(d);
    std::set<std::string> surfaces;
    for (int id = 0; id < v.size(); ++id) {
      CHECK(!v.surface(id).empty());
      surfaces.insert(v.surface(id));
    }
    CHECK(static_cast<int>(surfaces.size()) == v.size());
    CHECK(!v.find(std::string(kOmega)));
    Vocabulary c = Vocabulary::character_level(d);
    CHECK(c.find(std::string(kOmega)) == Vocabulary::kOmegaId);
    Formula f = generate_formula({d, 3, 5});
    CHECK(v.decode(v.encode(f), d) == f);
    CHECK(c.decode_text(c.encode(f)) == joined(f));
  }
  Vocabulary multi = Vocabulary::formula_level_multi();
  std::set<std::string> want;
  for (Domain d : kAllDomains) {
    for (const auto& s : domain_symbols(d)) want.insert(s);
  }
  CHECK(static_cast<int>(want.size()) + 3 == multi.size());
  // Union ids are stable across calls.
  CHECK(Vocabulary::formula_level_multi().hash() == multi.hash());
}
