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

#ifndef NRS_TERM_FORMULA_HPP_
#define NRS_TERM_FORMULA_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nrs/term/domain.hpp"

namespace nrs {

// End-of-computation symbol emitted by the Solver for atomic inputs.
inline constexpr std::string_view kOmega = "\xCF\x89";  // "ω"

enum class TokenKind { open, close, op, value, value_part, omega };

// Classifies a formula-level token surface for a domain. Tokens that belong
// to an atomic element but are not themselves a complete value (the "*" and
// variable tokens of an algebra monomial, or its coefficient) are value_part.
TokenKind classify_token(Domain domain, std::string_view surface);

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// A token sequence over a domain's formula-level alphabet. Immutable value.
class Formula {
 public:
  Formula() = default;
  Formula(Domain domain, std::vector<std::string> tokens)
      : domain_(domain), tokens_(std::move(tokens)) {}

  static Formula omega(Domain domain) { return Formula(domain, {std::string(kOmega)}); }

  Domain domain() const { return domain_; }
  const std::vector<std::string>& tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  const std::string& operator[](std::size_t i) const { return tokens_[i]; }

  // No brackets: the formula is an atomic element (or ω).
  bool is_atomic() const;
  bool is_omega() const { return tokens_.size() == 1 && tokens_[0] == kOmega; }

  Formula slice(std::size_t start, std::size_t end) const;
  std::string render() const;

  friend bool operator==(const Formula& a, const Formula& b) {
    return a.domain_ == b.domain_ && a.tokens_ == b.tokens_;
  }

 private:
  Domain domain_ = Domain::logic;
  std::vector<std::string> tokens_;
};

// Operator-application tree. An atomic node has an empty op and holds the
// token sequence of its value.
struct Term {
  std::string op;
  std::vector<Term> args;
  std::vector<std::string> value;

  bool is_atomic() const { return op.empty(); }
  static Term atom(std::vector<std::string> tokens) { return Term{{}, {}, std::move(tokens)}; }
};

// Splits surface text into tokens and checks the domain grammar.
Formula parse(std::string_view text, Domain domain);

// Lexer only; throws SyntaxError on illegal characters or out-of-range values.
std::vector<std::string> lex_tokens(std::string_view text, Domain domain);

// Canonical rendering; bit-exact surface syntax of the datasets.
std::string render(const Formula& formula);
std::string render_tokens(Domain domain, const std::vector<std::string>& tokens);

// Grammar check over an existing token sequence.
bool is_well_formed(const Formula& formula);

// Parses a well-formed token sequence into a tree. Throws SyntaxError, with
// a token index as the position, when the sequence is not well formed.
Term to_term(const Formula& formula);
Formula to_formula(const Term& term, Domain domain);

// Operator nesting depth: 0 for atoms, 1 for leaf formulas.
int nesting_depth(const Term& term);
int nesting_depth(const Formula& formula);

int operator_count(const Formula& formula);

}  // namespace nrs

#endif  // NRS_TERM_FORMULA_HPP_
