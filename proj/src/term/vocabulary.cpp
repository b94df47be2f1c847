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

#include "nrs/term/vocabulary.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "nrs/util/random.hpp"

namespace nrs {

std::vector<std::string> domain_symbols(Domain domain) {
  std::vector<std::string> out;
  auto add_ints = [&](int lo, int hi) {
    for (int v = lo; v <= hi; ++v) out.push_back(std::to_string(v));
  };
  switch (domain) {
    case Domain::logic:
      out = {"(", ")", "AND", "OR", "NOT", "True", "False"};
      for (char c : kLogicLetters) out.emplace_back(1, c);
      break;
    case Domain::listops:
      out = {"[", "]", "MIN", "MAX", "SM"};
      add_ints(0, 9);
      break;
    case Domain::arithmetic:
      out = {"(", ")", "+", "-", "*"};
      add_ints(-99, 99);
      break;
    case Domain::algebra:
      out = {"(", ")", "+", "-", "*"};
      for (char c : kAlgebraVariables) out.emplace_back(1, c);
      add_ints(-99, 99);
      break;
  }
  return out;
}

namespace {

std::vector<std::string> specials(VocabularyKind kind) {
  std::vector<std::string> out{"<pad>", "<bos>", "<eos>"};
  if (kind == VocabularyKind::character_level) out.emplace_back(kOmega);
  return out;
}

std::vector<std::string> characters_of(const std::vector<Domain>& domains) {
  std::set<char> chars;
  for (Domain d : domains) {
    for (const auto& s : domain_symbols(d)) chars.insert(s.begin(), s.end());
  }
  std::vector<std::string> out;
  for (char c : chars) out.emplace_back(1, c);
  return out;
}

}  // namespace

Vocabulary::Vocabulary(std::string name, VocabularyKind kind, std::vector<std::string> surfaces)
    : name_(std::move(name)), kind_(kind), surfaces_(std::move(surfaces)) {
  for (std::size_t i = 0; i < surfaces_.size(); ++i) {
    const bool inserted = index_.emplace(surfaces_[i], static_cast<int>(i)).second;
    if (!inserted) throw std::logic_error("duplicate vocabulary surface: " + surfaces_[i]);
  }
}

Vocabulary Vocabulary::formula_level(Domain domain) {
  auto surfaces = specials(VocabularyKind::formula_level);
  for (auto& s : domain_symbols(domain)) surfaces.push_back(std::move(s));
  return Vocabulary(std::string(domain_name(domain)) + ".formula", VocabularyKind::formula_level,
                    std::move(surfaces));
}

Vocabulary Vocabulary::formula_level_multi() {
  auto surfaces = specials(VocabularyKind::formula_level);
  std::set<std::string> seen(surfaces.begin(), surfaces.end());
  for (Domain d : kAllDomains) {
    for (auto& s : domain_symbols(d)) {
      if (seen.insert(s).second) surfaces.push_back(std::move(s));
    }
  }
  return Vocabulary("multi.formula", VocabularyKind::formula_level, std::move(surfaces));
}

Vocabulary Vocabulary::character_level(Domain domain) {
  auto surfaces = specials(VocabularyKind::character_level);
  for (auto& s : characters_of({domain})) surfaces.push_back(std::move(s));
  return Vocabulary(std::string(domain_name(domain)) + ".char", VocabularyKind::character_level,
                    std::move(surfaces));
}

Vocabulary Vocabulary::character_level_multi() {
  auto surfaces = specials(VocabularyKind::character_level);
  for (auto& s : characters_of({kAllDomains.begin(), kAllDomains.end()})) {
    surfaces.push_back(std::move(s));
  }
  return Vocabulary("multi.char", VocabularyKind::character_level, std::move(surfaces));
}

std::optional<int> Vocabulary::find(std::string_view surface) const {
  auto it = index_.find(std::string(surface));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<int> Vocabulary::encode(const Formula& formula) const {
  if (kind_ == VocabularyKind::formula_level) {
    std::vector<int> ids;
    ids.reserve(formula.size());
    for (const auto& t : formula.tokens()) {
      auto id = find(t);
      if (!id || is_special(*id)) throw std::out_of_range("token '" + t + "' not in " + name_);
      ids.push_back(*id);
    }
    return ids;
  }
  if (formula.is_omega()) return {kOmegaId};
  std::string text;
  for (const auto& t : formula.tokens()) text += t;
  return encode_text(text);
}

std::vector<int> Vocabulary::encode_text(std::string_view text) const {
  if (text == kOmega && has_omega()) return {kOmegaId};
  std::vector<int> ids;
  ids.reserve(text.size());
  for (char c : text) {
    if (c == ' ') continue;
    auto id = find(std::string_view(&c, 1));
    if (!id) throw std::out_of_range(std::string("character '") + c + "' not in " + name_);
    ids.push_back(*id);
  }
  return ids;
}

Vocabulary Vocabulary::by_name(std::string_view name) {
  const auto dot = name.find('.');
  if (dot == std::string_view::npos) throw std::invalid_argument("bad vocabulary name: " + std::string(name));
  const std::string_view scope = name.substr(0, dot);
  const std::string_view kind = name.substr(dot + 1);
  if (kind != "formula" && kind != "char") throw std::invalid_argument("bad vocabulary name: " + std::string(name));
  const bool formula = kind == "formula";
  if (scope == "multi") return formula ? formula_level_multi() : character_level_multi();
  const Domain d = parse_domain(scope);
  return formula ? formula_level(d) : character_level(d);
}

std::vector<int> Vocabulary::encode_lenient(const Formula& formula) const {
  try {
    return encode(formula);
  } catch (const std::out_of_range&) {
  }
  std::vector<int> ids;
  if (kind_ == VocabularyKind::formula_level) {
    for (const auto& t : formula.tokens()) {
      auto id = find(t);
      ids.push_back(id && !is_special(*id) ? *id : kPad);
    }
    return ids;
  }
  for (const auto& t : formula.tokens()) {
    if (t == kOmega) {
      ids.push_back(kOmegaId);
      continue;
    }
    for (char c : t) {
      if (c == ' ') continue;
      auto id = find(std::string_view(&c, 1));
      ids.push_back(id ? *id : kPad);
    }
  }
  return ids;
}

std::string Vocabulary::decode_text(const std::vector<int>& ids) const {
  std::string text;
  for (int id : ids) {
    if (id == kEos) break;
    if (id == kPad || id == kBos) continue;
    text += surface(id);
  }
  return text;
}

Formula Vocabulary::decode(const std::vector<int>& ids, Domain domain) const {
  if (kind_ == VocabularyKind::character_level) {
    return tokenize_lenient(decode_text(ids), domain);
  }
  std::vector<std::string> tokens;
  for (int id : ids) {
    if (id == kEos) break;
    if (id == kPad || id == kBos) continue;
    tokens.push_back(surface(id));
  }
  return Formula(domain, std::move(tokens));
}

std::uint64_t Vocabulary::hash() const {
  std::uint64_t h = fnv1a(kind_ == VocabularyKind::formula_level ? "formula" : "character");
  for (const auto& s : surfaces_) {
    h = fnv1a(s, h);
    h = fnv1a(std::string_view("\x1f", 1), h);
  }
  return h;
}

Formula tokenize_lenient(std::string_view text, Domain domain) {
  if (text == kOmega) return Formula::omega(domain);
  try {
    return Formula(domain, lex_tokens(text, domain));
  } catch (const SyntaxError&) {
    std::vector<std::string> chars;
    for (char c : text) chars.emplace_back(1, c);
    return Formula(domain, std::move(chars));
  }
}

}  // namespace nrs
