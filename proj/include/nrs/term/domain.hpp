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

#ifndef NRS_TERM_DOMAIN_HPP_
#define NRS_TERM_DOMAIN_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace nrs {

enum class Domain : std::uint8_t { logic, listops, arithmetic, algebra };

inline constexpr std::array<Domain, 4> kAllDomains{Domain::logic, Domain::listops,
                                                   Domain::arithmetic, Domain::algebra};

std::string_view domain_name(Domain domain);

// Throws std::invalid_argument for unknown names.
Domain parse_domain(std::string_view name);

struct OperatorSpec {
  std::string symbol;
  int min_arity = 2;
  int max_arity = 2;
};

// Grammar, value space and generation parameters of one problem domain.
struct DomainSpec {
  Domain domain = Domain::logic;
  std::vector<OperatorSpec> operators;
  int max_train_nesting = 3;
  std::vector<int> ood_nesting{4, 5, 6};
  int test_nesting_ceiling = 6;
  // Integer value range for arithmetic values, algebra coefficients and
  // ListOps digits. Unused for logic.
  int value_min = 0;
  int value_max = 0;
  // Reduction modulus applied to arithmetic results and algebra coefficients.
  int modulus = 100;

  static const DomainSpec& of(Domain domain);

  const OperatorSpec* find_operator(std::string_view symbol) const;
};

inline constexpr std::string_view kLogicLetters = "abcdefghijklmnopqrstuvwxyz";
inline constexpr std::string_view kAlgebraVariables = "abxy";

}  // namespace nrs

#endif  // NRS_TERM_DOMAIN_HPP_
