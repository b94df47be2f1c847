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

#include "nrs/term/rewrite.hpp"

#include <algorithm>
#include <charconv>

#include "nrs/term/domain.hpp"

namespace nrs {

namespace {

bool opens(const std::string& t) { return t == "(" || t == "["; }
bool closes(const std::string& t) { return t == ")" || t == "]"; }

int to_int(const std::string& s) {
  int value = 0;
  std::from_chars(s.data(), s.data() + s.size(), value);
  return value;
}

std::string eval_logic(const std::string& op, const std::vector<Term>& args) {
  const auto& a = args[0].value[0];
  if (op == "NOT") {
    if (a == "True") return "False";
    if (a == "False") return "True";
    throw MalformedLeaf("no rule for negation of literal " + a);
  }
  const auto& b = args[1].value[0];
  if (op == "AND") {
    if (a == "False" || b == "False") return "False";
    if (a == "True") return b;
    if (b == "True") return a;
  } else {
    if (a == "True" || b == "True") return "True";
    if (a == "False") return b;
    if (b == "False") return a;
  }
  if (a == b) return a;
  throw MalformedLeaf("no rule for (" + a + " " + op + " " + b + ")");
}

std::vector<std::string> eval_leaf(const Term& leaf, Domain domain) {
  const DomainSpec& spec = DomainSpec::of(domain);
  switch (domain) {
    case Domain::logic:
      return {eval_logic(leaf.op, leaf.args)};
    case Domain::listops: {
      std::vector<int> xs;
      for (const Term& a : leaf.args) xs.push_back(to_int(a.value[0]));
      int r = 0;
      if (leaf.op == "MIN") {
        r = *std::min_element(xs.begin(), xs.end());
      } else if (leaf.op == "MAX") {
        r = *std::max_element(xs.begin(), xs.end());
      } else {
        for (int x : xs) r += x;
        r %= spec.modulus;
      }
      return {std::to_string(r)};
    }
    case Domain::arithmetic: {
      const long long a = to_int(leaf.args[0].value[0]);
      const long long b = to_int(leaf.args[1].value[0]);
      long long r = leaf.op == "+" ? a + b : leaf.op == "-" ? a - b : a * b;
      return {std::to_string(truncated_mod(r, spec.modulus))};
    }
    case Domain::algebra: {
      const long long a = to_int(leaf.args[0].value[0]);
      const long long b = to_int(leaf.args[1].value[0]);
      const long long r = truncated_mod(leaf.op == "+" ? a + b : a - b, spec.modulus);
      std::vector<std::string> out{std::to_string(r)};
      out.insert(out.end(), leaf.args[0].value.begin() + 1, leaf.args[0].value.end());
      return out;
    }
  }
  throw MalformedLeaf("unknown domain");
}

}  // namespace

std::optional<std::vector<std::string>> evaluate_leaf(const Term& leaf, Domain domain) {
  try {
    return eval_leaf(leaf, domain);
  } catch (const MalformedLeaf&) {
    return std::nullopt;
  }
}

std::vector<LeafSpan> find_leaf_spans(const Formula& formula) {
  const auto& toks = formula.tokens();
  if (formula.is_atomic()) return {LeafSpan{0, toks.size(), toks}};
  std::vector<LeafSpan> spans;
  // (open index, saw a nested bracket)
  std::vector<std::pair<std::size_t, bool>> stack;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (opens(toks[i])) {
      if (!stack.empty()) stack.back().second = true;
      stack.emplace_back(i, false);
    } else if (closes(toks[i]) && !stack.empty()) {
      auto [open, nested] = stack.back();
      stack.pop_back();
      if (!nested) {
        spans.push_back(LeafSpan{open, i + 1,
                                 std::vector<std::string>(toks.begin() + static_cast<std::ptrdiff_t>(open),
                                                          toks.begin() + static_cast<std::ptrdiff_t>(i + 1))});
      }
    }
  }
  return spans;
}

bool is_leaf_formula(const Formula& formula) {
  if (formula.empty() || formula.is_atomic() || !is_well_formed(formula)) return false;
  return nesting_depth(formula) == 1;
}

Formula apply_rule(const Formula& leaf) {
  if (leaf.is_omega()) throw MalformedLeaf("ω is not rewritable");
  Term term;
  try {
    term = to_term(leaf);
  } catch (const SyntaxError& e) {
    throw MalformedLeaf(std::string("not a formula: ") + e.what());
  }
  if (term.is_atomic()) return Formula::omega(leaf.domain());
  if (nesting_depth(term) != 1) throw MalformedLeaf("not a leaf formula: " + leaf.render());
  return Formula(leaf.domain(), eval_leaf(term, leaf.domain()));
}

Formula splice(const Formula& formula, std::size_t start, std::size_t end,
               const Formula& replacement) {
  const auto& toks = formula.tokens();
  std::vector<std::string> out;
  out.reserve(toks.size() - (end - start) + replacement.size());
  out.insert(out.end(), toks.begin(), toks.begin() + static_cast<std::ptrdiff_t>(start));
  out.insert(out.end(), replacement.tokens().begin(), replacement.tokens().end());
  out.insert(out.end(), toks.begin() + static_cast<std::ptrdiff_t>(end), toks.end());
  return Formula(formula.domain(), std::move(out));
}

int default_step_limit(const Formula& formula) { return 4 * operator_count(formula) + 4; }

Reduction reduce_fully(const Formula& formula, std::optional<int> step_limit) {
  const int limit = step_limit.value_or(default_step_limit(formula));
  Reduction out{formula, {}};
  while (!out.value.is_atomic()) {
    if (static_cast<int>(out.steps.size()) >= limit) {
      throw StepLimitExceeded("step limit exceeded reducing " + formula.render());
    }
    auto spans = find_leaf_spans(out.value);
    if (spans.empty()) throw MalformedLeaf("no leaf formula in " + out.value.render());
    const LeafSpan& last = spans.back();
    Formula value = apply_rule(out.value.slice(last.start, last.end));
    out.value = splice(out.value, last.start, last.end, value);
    out.steps.push_back(out.value);
  }
  return out;
}

}  // namespace nrs
