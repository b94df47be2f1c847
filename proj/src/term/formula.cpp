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

#include "nrs/term/formula.hpp"

#include <algorithm>
#include <cctype>

namespace nrs {

namespace {

bool is_int_token(std::string_view s, int lo, int hi) {
  std::size_t i = 0;
  bool negative = false;
  if (!s.empty() && s[0] == '-') {
    negative = true;
    i = 1;
  }
  const std::size_t digits = s.size() - i;
  if (digits == 0 || digits > 2) return false;
  for (std::size_t j = i; j < s.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) return false;
  }
  if (digits == 2 && s[i] == '0') return false;
  int value = 0;
  for (std::size_t j = i; j < s.size(); ++j) value = value * 10 + (s[j] - '0');
  if (negative && value == 0) return false;
  if (negative) value = -value;
  return value >= lo && value <= hi;
}

bool is_logic_value(std::string_view s) {
  if (s == "True" || s == "False") return true;
  return s.size() == 1 && s[0] >= 'a' && s[0] <= 'z';
}

bool is_algebra_variable(std::string_view s) {
  return s.size() == 1 && kAlgebraVariables.find(s[0]) != std::string_view::npos;
}

bool is_open(std::string_view s) { return s == "(" || s == "["; }
bool is_close(std::string_view s) { return s == ")" || s == "]"; }

}  // namespace

TokenKind classify_token(Domain domain, std::string_view s) {
  if (is_open(s)) return TokenKind::open;
  if (is_close(s)) return TokenKind::close;
  if (s == kOmega) return TokenKind::omega;
  switch (domain) {
    case Domain::logic:
      return (s == "AND" || s == "OR" || s == "NOT") ? TokenKind::op : TokenKind::value;
    case Domain::listops:
      return (s == "MIN" || s == "MAX" || s == "SM") ? TokenKind::op : TokenKind::value;
    case Domain::arithmetic:
      return (s == "+" || s == "-" || s == "*") ? TokenKind::op : TokenKind::value;
    case Domain::algebra:
      return (s == "+" || s == "-") ? TokenKind::op : TokenKind::value_part;
  }
  return TokenKind::value;
}

bool Formula::is_atomic() const {
  return !tokens_.empty() &&
         std::none_of(tokens_.begin(), tokens_.end(),
                      [](const std::string& t) { return is_open(t) || is_close(t); });
}

Formula Formula::slice(std::size_t start, std::size_t end) const {
  return Formula(domain_, std::vector<std::string>(tokens_.begin() + static_cast<std::ptrdiff_t>(start),
                                                   tokens_.begin() + static_cast<std::ptrdiff_t>(end)));
}

std::string Formula::render() const { return render_tokens(domain_, tokens_); }

std::string render(const Formula& formula) { return formula.render(); }

std::string render_tokens(Domain domain, const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (domain == Domain::logic && i > 0 && tokens[i - 1] != "(" && tokens[i] != ")") {
      out += ' ';
    }
    out += tokens[i];
  }
  return out;
}

namespace {

struct Lexed {
  std::vector<std::string> tokens;
  std::vector<std::size_t> offsets;
};

Lexed lex_with_offsets(std::string_view text, Domain domain) {
  Lexed out;
  const DomainSpec& spec = DomainSpec::of(domain);
  auto push = [&](std::string token, std::size_t at) {
    out.tokens.push_back(std::move(token));
    out.offsets.push_back(at);
  };
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    const std::size_t at = i;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '(' || c == ')' || c == '[' || c == ']') {
      const bool square = (c == '[' || c == ']');
      if (square != (domain == Domain::listops)) throw SyntaxError("unexpected bracket", at);
      push(std::string(1, c), at);
      ++i;
      continue;
    }
    switch (domain) {
      case Domain::logic:
      case Domain::listops: {
        if (std::isalpha(static_cast<unsigned char>(c))) {
          std::size_t j = i;
          while (j < text.size() && std::isalpha(static_cast<unsigned char>(text[j]))) ++j;
          std::string word(text.substr(i, j - i));
          const bool ok = domain == Domain::logic
                              ? (is_logic_value(word) || spec.find_operator(word) != nullptr)
                              : spec.find_operator(word) != nullptr;
          if (!ok) throw SyntaxError("unknown word '" + word + "'", at);
          push(std::move(word), at);
          i = j;
          continue;
        }
        if (domain == Domain::listops && std::isdigit(static_cast<unsigned char>(c))) {
          push(std::string(1, c), at);
          ++i;
          continue;
        }
        throw SyntaxError(std::string("illegal character '") + c + "'", at);
      }
      case Domain::arithmetic:
      case Domain::algebra: {
        const bool next_is_digit =
            i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1]));
        bool sign = false;
        if (c == '-' && next_is_digit) {
          if (out.tokens.empty()) {
            sign = true;
          } else {
            const std::string& prev = out.tokens.back();
            sign = prev == "(" || prev == "+" || prev == "-" ||
                   (domain == Domain::arithmetic && prev == "*");
          }
        }
        if (sign || std::isdigit(static_cast<unsigned char>(c))) {
          std::size_t j = sign ? i + 1 : i;
          while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
          std::string number(text.substr(i, j - i));
          if (!is_int_token(number, spec.value_min, spec.value_max)) {
            throw SyntaxError("integer '" + number + "' out of range or not canonical", at);
          }
          push(std::move(number), at);
          i = j;
          continue;
        }
        if (c == '+' || c == '-' || c == '*') {
          push(std::string(1, c), at);
          ++i;
          continue;
        }
        if (domain == Domain::algebra && is_algebra_variable(std::string_view(&c, 1))) {
          push(std::string(1, c), at);
          ++i;
          continue;
        }
        throw SyntaxError(std::string("illegal character '") + c + "'", at);
      }
    }
  }
  return out;
}

// Recursive descent over a token sequence. Positions are token indices.
class TermParser {
 public:
  TermParser(const std::vector<std::string>& tokens, Domain domain)
      : tokens_(tokens), domain_(domain), spec_(DomainSpec::of(domain)) {}

  Term parse_all() {
    if (tokens_.empty()) throw SyntaxError("empty formula", 0);
    Term term = expr();
    if (pos_ != tokens_.size()) throw SyntaxError("trailing tokens", pos_);
    if (domain_ == Domain::algebra) check_shared_variables(term);
    return term;
  }

 private:
  const std::string& peek() const {
    if (pos_ >= tokens_.size()) throw SyntaxError("unexpected end of formula", pos_);
    return tokens_[pos_];
  }
  const std::string& take() {
    const std::string& t = peek();
    ++pos_;
    return t;
  }
  void expect(std::string_view s) {
    if (peek() != s) throw SyntaxError("expected '" + std::string(s) + "'", pos_);
    ++pos_;
  }

  Term expr() {
    switch (domain_) {
      case Domain::logic: return logic_expr();
      case Domain::listops: return listops_expr();
      case Domain::arithmetic: return infix_expr();
      case Domain::algebra: return infix_expr();
    }
    throw SyntaxError("unknown domain", pos_);
  }

  Term logic_expr() {
    const std::string& t = peek();
    if (is_logic_value(t)) return Term::atom({take()});
    expect("(");
    if (peek() == "NOT") {
      ++pos_;
      Term arg = logic_expr();
      expect(")");
      return Term{"NOT", {std::move(arg)}, {}};
    }
    Term lhs = logic_expr();
    const std::string& op = peek();
    if (op != "AND" && op != "OR") throw SyntaxError("expected AND/OR", pos_);
    std::string op_copy = take();
    Term rhs = logic_expr();
    expect(")");
    return Term{std::move(op_copy), {std::move(lhs), std::move(rhs)}, {}};
  }

  Term listops_expr() {
    const std::string& t = peek();
    if (t.size() == 1 && std::isdigit(static_cast<unsigned char>(t[0]))) return Term::atom({take()});
    expect("[");
    const std::string& op = peek();
    if (spec_.find_operator(op) == nullptr) throw SyntaxError("expected list operator", pos_);
    Term node{take(), {}, {}};
    while (peek() != "]") node.args.push_back(listops_expr());
    if (node.args.empty()) throw SyntaxError("list operator without arguments", pos_);
    ++pos_;
    return node;
  }

  Term infix_expr() {
    if (peek() != "(") return domain_ == Domain::algebra ? monomial() : integer();
    ++pos_;
    Term lhs = infix_expr();
    const std::string& op = peek();
    if (spec_.find_operator(op) == nullptr) throw SyntaxError("expected operator", pos_);
    std::string op_copy = take();
    Term rhs = infix_expr();
    expect(")");
    return Term{std::move(op_copy), {std::move(lhs), std::move(rhs)}, {}};
  }

  Term integer() {
    const std::string& t = peek();
    if (!is_int_token(t, spec_.value_min, spec_.value_max)) throw SyntaxError("expected integer", pos_);
    return Term::atom({take()});
  }

  Term monomial() {
    std::vector<std::string> value;
    const std::string& coeff = peek();
    if (!is_int_token(coeff, spec_.value_min, spec_.value_max)) {
      throw SyntaxError("expected monomial coefficient", pos_);
    }
    value.push_back(take());
    char last = 0;
    while (pos_ < tokens_.size() && tokens_[pos_] == "*") {
      ++pos_;
      const std::string& var = peek();
      if (!is_algebra_variable(var)) throw SyntaxError("expected variable", pos_);
      const auto rank = kAlgebraVariables.find(var[0]);
      if (last != 0 && rank <= kAlgebraVariables.find(last)) {
        throw SyntaxError("variables must be distinct and ordered", pos_);
      }
      last = var[0];
      value.push_back("*");
      value.push_back(take());
    }
    if (value.size() == 1) throw SyntaxError("monomial without variables", pos_);
    return Term::atom(std::move(value));
  }

  void check_shared_variables(const Term& root) {
    std::vector<std::string> reference;
    bool have = false;
    std::vector<const Term*> stack{&root};
    while (!stack.empty()) {
      const Term* t = stack.back();
      stack.pop_back();
      if (t->is_atomic()) {
        std::vector<std::string> vars(t->value.begin() + 1, t->value.end());
        if (!have) {
          reference = std::move(vars);
          have = true;
        } else if (vars != reference) {
          throw SyntaxError("monomials must share the same variables", 0);
        }
      }
      for (const Term& a : t->args) stack.push_back(&a);
    }
  }

  const std::vector<std::string>& tokens_;
  Domain domain_;
  const DomainSpec& spec_;
  std::size_t pos_ = 0;
};

void append_term(const Term& term, Domain domain, std::vector<std::string>& out) {
  if (term.is_atomic()) {
    out.insert(out.end(), term.value.begin(), term.value.end());
    return;
  }
  if (domain == Domain::listops) {
    out.emplace_back("[");
    out.push_back(term.op);
    for (const Term& a : term.args) append_term(a, domain, out);
    out.emplace_back("]");
    return;
  }
  out.emplace_back("(");
  if (term.args.size() == 1) {
    out.push_back(term.op);
    append_term(term.args[0], domain, out);
  } else {
    append_term(term.args[0], domain, out);
    out.push_back(term.op);
    append_term(term.args[1], domain, out);
  }
  out.emplace_back(")");
}

}  // namespace

Formula parse(std::string_view text, Domain domain) {
  Lexed lexed = lex_with_offsets(text, domain);
  try {
    TermParser(lexed.tokens, domain).parse_all();
  } catch (const SyntaxError& e) {
    const std::size_t at =
        e.position() < lexed.offsets.size() ? lexed.offsets[e.position()] : text.size();
    std::string message = e.what();
    message = message.substr(0, message.rfind(" at position "));
    throw SyntaxError(message, at);
  }
  return Formula(domain, std::move(lexed.tokens));
}

std::vector<std::string> lex_tokens(std::string_view text, Domain domain) {
  return lex_with_offsets(text, domain).tokens;
}

bool is_well_formed(const Formula& formula) {
  try {
    TermParser(formula.tokens(), formula.domain()).parse_all();
    return true;
  } catch (const SyntaxError&) {
    return false;
  }
}

Term to_term(const Formula& formula) {
  return TermParser(formula.tokens(), formula.domain()).parse_all();
}

Formula to_formula(const Term& term, Domain domain) {
  std::vector<std::string> tokens;
  append_term(term, domain, tokens);
  return Formula(domain, std::move(tokens));
}

int nesting_depth(const Term& term) {
  int depth = 0;
  for (const Term& a : term.args) depth = std::max(depth, nesting_depth(a));
  return term.is_atomic() ? 0 : depth + 1;
}

int nesting_depth(const Formula& formula) {
  int depth = 0;
  int best = 0;
  for (const auto& t : formula.tokens()) {
    if (is_open(t)) best = std::max(best, ++depth);
    if (is_close(t)) --depth;
  }
  return best;
}

int operator_count(const Formula& formula) {
  return static_cast<int>(std::count_if(formula.tokens().begin(), formula.tokens().end(),
                                        [&](const std::string& t) {
                                          return classify_token(formula.domain(), t) == TokenKind::op;
                                        }));
}

}  // namespace nrs
