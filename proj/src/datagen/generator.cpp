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

#include "nrs/datagen/generator.hpp"

#include <stdexcept>
#include <string>

#include "nrs/term/domain.hpp"
#include "nrs/term/rewrite.hpp"

namespace nrs {

namespace {

std::string random_letter(Rng& rng) { return std::string(1, kLogicLetters[rng.index(kLogicLetters.size())]); }

std::string random_logic_value(Rng& rng, const std::string& hint) {
  const double u = rng.uniform();
  if (u < 0.25) return "True";
  if (u < 0.5) return "False";
  const bool hint_is_letter = hint.size() == 1;
  if (hint_is_letter && rng.bernoulli(0.5)) return hint;
  return random_letter(rng);
}

std::string random_int(Rng& rng, int lo, int hi) {
  return std::to_string(rng.uniform_int(lo, hi));
}

std::vector<std::string> random_monomial(Rng& rng, const std::vector<std::string>& vars) {
  std::vector<std::string> out{random_int(rng, -99, 99)};
  for (const auto& v : vars) {
    out.emplace_back("*");
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> random_variable_set(Rng& rng) {
  // Non-empty subset of {a, b, x, y}, canonical order.
  const auto mask = static_cast<unsigned>(rng.uniform_int(1, 15));
  std::vector<std::string> vars;
  for (std::size_t i = 0; i < kAlgebraVariables.size(); ++i) {
    if (mask & (1U << i)) vars.emplace_back(1, kAlgebraVariables[i]);
  }
  return vars;
}

struct Slot {
  Term* node;
  std::size_t arg;
};

// Chooses an operator for `node` with at least `min_slots` argument slots
// and sizes its argument list.
void choose_operator(Term& node, const GenSpec& spec, Rng& rng, int min_slots,
                     const std::string* logic_target) {
  const DomainSpec& ds = DomainSpec::of(spec.domain);
  std::vector<const OperatorSpec*> allowed;
  for (const auto& op : ds.operators) {
    int max_arity = op.max_arity;
    if (spec.domain == Domain::listops) max_arity = spec.listops_max_args;
    if (max_arity < min_slots) continue;
    if (logic_target != nullptr && op.symbol == "NOT" && logic_target->size() == 1) continue;
    allowed.push_back(&op);
  }
  if (allowed.empty()) throw std::logic_error("no operator satisfies the nesting constraint");
  const OperatorSpec& op = *allowed[rng.index(allowed.size())];
  int arity = op.min_arity;
  if (spec.domain == Domain::listops) {
    arity = static_cast<int>(rng.uniform_int(std::max(spec.listops_min_args, min_slots),
                                             spec.listops_max_args));
  }
  node.op = op.symbol;
  node.args.assign(static_cast<std::size_t>(arity), Term{});
}

// Draws logic argument values (a[, b]) whose combination under op is target.
std::vector<std::string> logic_arguments(const std::string& op, const std::string& target, Rng& rng) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Term leaf{op, {}, {}};
    const std::size_t arity = op == "NOT" ? 1 : 2;
    std::vector<std::string> values;
    for (std::size_t i = 0; i < arity; ++i) {
      values.push_back(random_logic_value(rng, target));
      leaf.args.push_back(Term::atom({values.back()}));
    }
    auto value = evaluate_leaf(leaf, Domain::logic);
    if (value && (*value)[0] == target) return values;
  }
  throw std::logic_error("could not satisfy logic target " + target);
}

}  // namespace

std::vector<std::string> random_atom(Domain domain, Rng& rng) {
  switch (domain) {
    case Domain::logic: return {random_logic_value(rng, "")};
    case Domain::listops: return {random_int(rng, 0, 9)};
    case Domain::arithmetic: return {random_int(rng, -99, 99)};
    case Domain::algebra: return random_monomial(rng, random_variable_set(rng));
  }
  return {};
}

Term generate_term(const GenSpec& spec) {
  if (spec.nesting < 0) throw std::invalid_argument("nesting must be non-negative");
  Rng rng(spec.seed);
  const bool logic = spec.domain == Domain::logic;
  std::vector<std::string> algebra_vars;
  if (spec.domain == Domain::algebra) algebra_vars = random_variable_set(rng);

  auto atom = [&](const std::string* target) -> Term {
    if (logic) return Term::atom({target ? *target : random_logic_value(rng, "")});
    if (spec.domain == Domain::algebra) return Term::atom(random_monomial(rng, algebra_vars));
    return Term::atom(random_atom(spec.domain, rng));
  };

  if (spec.nesting == 0) return atom(nullptr);

  Term root;
  // Nodes of the current level together with their target values (logic).
  std::vector<std::pair<Term*, std::string>> level{{&root, logic ? random_logic_value(rng, "") : ""}};
  for (int depth = 0; depth < spec.nesting; ++depth) {
    const bool deepest = depth == spec.nesting - 1;
    // The single root must host both nesting points; later levels have two
    // nodes and therefore always at least two slots.
    const int min_slots = (!deepest && level.size() == 1) ? 2 : 1;
    std::vector<Slot> slots;
    for (auto& [node, target] : level) {
      choose_operator(*node, spec, rng, min_slots, logic ? &target : nullptr);
      for (std::size_t a = 0; a < node->args.size(); ++a) slots.push_back({node, a});
    }
    std::vector<bool> nested(slots.size(), false);
    if (!deepest) {
      const std::size_t first = rng.index(slots.size());
      std::size_t second = rng.index(slots.size() - 1);
      if (second >= first) ++second;
      nested[first] = nested[second] = true;
    }
    std::vector<std::pair<Term*, std::string>> next;
    std::size_t s = 0;
    for (auto& [node, target] : level) {
      std::vector<std::string> values;
      if (logic) values = logic_arguments(node->op, target, rng);
      for (std::size_t a = 0; a < node->args.size(); ++a, ++s) {
        const std::string* value = logic ? &values[a] : nullptr;
        if (nested[s]) {
          next.emplace_back(&node->args[a], logic ? values[a] : "");
        } else {
          node->args[a] = atom(value);
        }
      }
    }
    level = std::move(next);
  }
  return root;
}

Formula generate_formula(const GenSpec& spec) { return to_formula(generate_term(spec), spec.domain); }

std::vector<Formula> enumerate_atoms(Domain domain) {
  std::vector<Formula> out;
  switch (domain) {
    case Domain::logic:
      out.push_back(Formula(domain, {"True"}));
      out.push_back(Formula(domain, {"False"}));
      for (char c : kLogicLetters) out.push_back(Formula(domain, {std::string(1, c)}));
      break;
    case Domain::listops:
      for (int v = 0; v <= 9; ++v) out.push_back(Formula(domain, {std::to_string(v)}));
      break;
    case Domain::arithmetic:
      for (int v = -99; v <= 99; ++v) out.push_back(Formula(domain, {std::to_string(v)}));
      break;
    case Domain::algebra:
      for (unsigned mask = 1; mask < 16; ++mask) {
        for (int v = -99; v <= 99; ++v) {
          std::vector<std::string> toks{std::to_string(v)};
          for (std::size_t i = 0; i < kAlgebraVariables.size(); ++i) {
            if (mask & (1U << i)) {
              toks.emplace_back("*");
              toks.emplace_back(1, kAlgebraVariables[i]);
            }
          }
          out.push_back(Formula(domain, std::move(toks)));
        }
      }
      break;
  }
  return out;
}

std::vector<Formula> enumerate_logic_leaves() {
  std::vector<std::string> values{"True", "False"};
  for (char c : kLogicLetters) values.emplace_back(1, c);
  std::vector<Formula> out;
  for (const char* op : {"AND", "OR"}) {
    for (const auto& a : values) {
      for (const auto& b : values) {
        Term leaf{op, {Term::atom({a}), Term::atom({b})}, {}};
        if (evaluate_leaf(leaf, Domain::logic)) out.push_back(to_formula(leaf, Domain::logic));
      }
    }
  }
  for (const char* v : {"True", "False"}) {
    out.push_back(to_formula(Term{"NOT", {Term::atom({v})}, {}}, Domain::logic));
  }
  return out;
}

}  // namespace nrs
