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

#include "nrs/term/domain.hpp"

#include <stdexcept>

namespace nrs {

std::string_view domain_name(Domain domain) {
  switch (domain) {
    case Domain::logic: return "logic";
    case Domain::listops: return "listops";
    case Domain::arithmetic: return "arithmetic";
    case Domain::algebra: return "algebra";
  }
  return "unknown";
}

Domain parse_domain(std::string_view name) {
  for (Domain d : kAllDomains) {
    if (domain_name(d) == name) return d;
  }
  throw std::invalid_argument("unknown domain: " + std::string(name));
}

namespace {

DomainSpec make_spec(Domain domain) {
  DomainSpec spec;
  spec.domain = domain;
  switch (domain) {
    case Domain::logic:
      spec.operators = {{"AND", 2, 2}, {"OR", 2, 2}, {"NOT", 1, 1}};
      spec.test_nesting_ceiling = 12;
      break;
    case Domain::listops:
      spec.operators = {{"MIN", 2, 2}, {"MAX", 2, 2}, {"SM", 2, 2}};
      spec.value_min = 0;
      spec.value_max = 9;
      spec.modulus = 10;
      break;
    case Domain::arithmetic:
      spec.operators = {{"+", 2, 2}, {"-", 2, 2}, {"*", 2, 2}};
      spec.value_min = -99;
      spec.value_max = 99;
      break;
    case Domain::algebra:
      spec.operators = {{"+", 2, 2}, {"-", 2, 2}};
      spec.value_min = -99;
      spec.value_max = 99;
      break;
  }
  return spec;
}

}  // namespace

const DomainSpec& DomainSpec::of(Domain domain) {
  static const std::array<DomainSpec, 4> specs{make_spec(Domain::logic), make_spec(Domain::listops),
                                               make_spec(Domain::arithmetic),
                                               make_spec(Domain::algebra)};
  return specs[static_cast<std::size_t>(domain)];
}

const OperatorSpec* DomainSpec::find_operator(std::string_view symbol) const {
  for (const auto& op : operators) {
    if (op.symbol == symbol) return &op;
  }
  return nullptr;
}

}  // namespace nrs
