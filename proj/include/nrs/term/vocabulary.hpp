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

#ifndef NRS_TERM_VOCABULARY_HPP_
#define NRS_TERM_VOCABULARY_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nrs/term/domain.hpp"
#include "nrs/term/formula.hpp"

namespace nrs {

enum class VocabularyKind { formula_level, character_level };

struct Token {
  int id = 0;
  std::string surface;
};

// Ordered token alphabet. Ids 0..2 are <pad>, <bos>, <eos> in every
// vocabulary; character-level vocabularies also reserve ω at id 3.
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kBos = 1;
  static constexpr int kEos = 2;
  static constexpr int kOmegaId = 3;

  static Vocabulary formula_level(Domain domain);
  static Vocabulary formula_level_multi();
  static Vocabulary character_level(Domain domain);
  static Vocabulary character_level_multi();
  // Inverse of name(): "<domain|multi>.<formula|char>".
  static Vocabulary by_name(std::string_view name);

  const std::string& name() const { return name_; }
  VocabularyKind kind() const { return kind_; }
  int size() const { return static_cast<int>(surfaces_.size()); }
  const std::string& surface(int id) const { return surfaces_.at(static_cast<std::size_t>(id)); }
  Token token(int id) const { return Token{id, surface(id)}; }
  std::optional<int> find(std::string_view surface) const;
  bool has_omega() const { return kind_ == VocabularyKind::character_level; }
  bool is_special(int id) const { return id < 3; }

  // Formula-level: one id per token. Character-level: one id per character
  // of the rendering without whitespace, or the single ω id.
  // Throws std::out_of_range for symbols outside the alphabet.
  std::vector<int> encode(const Formula& formula) const;
  std::vector<int> encode_text(std::string_view text) const;
  // As encode, but symbols outside the alphabet map to <pad>. For model
  // inputs that may contain earlier garbage output.
  std::vector<int> encode_lenient(const Formula& formula) const;

  // Inverse of encode; stops at <eos>, ignores <pad>/<bos>.
  Formula decode(const std::vector<int>& ids, Domain domain) const;
  std::string decode_text(const std::vector<int>& ids) const;

  std::uint64_t hash() const;

 private:
  Vocabulary(std::string name, VocabularyKind kind, std::vector<std::string> surfaces);

  std::string name_;
  VocabularyKind kind_;
  std::vector<std::string> surfaces_;
  std::unordered_map<std::string, int> index_;
};

// Token surfaces of one domain's formula-level alphabet (no specials).
std::vector<std::string> domain_symbols(Domain domain);

// Lexes text without grammar checks. Unlexable characters become
// single-character tokens so that garbage model output stays displayable.
Formula tokenize_lenient(std::string_view text, Domain domain);

}  // namespace nrs

#endif  // NRS_TERM_VOCABULARY_HPP_
