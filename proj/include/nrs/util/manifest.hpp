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

#ifndef NRS_UTIL_MANIFEST_HPP_
#define NRS_UTIL_MANIFEST_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nrs {

// Plain-text "key = value" file, one entry per line, in insertion order.
// Lines starting with '#' are comments. Used for dataset manifests,
// checkpoint manifests and training configs.
class Manifest {
 public:
  void set(std::string key, std::string value);
  void set(std::string key, const char* value) { set(std::move(key), std::string(value)); }
  void set(std::string key, long long value);
  void set(std::string key, int value) { set(std::move(key), static_cast<long long>(value)); }
  void set(std::string key, std::size_t value) { set(std::move(key), static_cast<long long>(value)); }
  void set(std::string key, double value);
  void set(std::string key, bool value) { set(std::move(key), std::string(value ? "true" : "false")); }

  bool contains(std::string_view key) const;
  std::optional<std::string> find(std::string_view key) const;

  // Throw std::out_of_range when absent, std::invalid_argument when the value
  // does not have the requested type.
  const std::string& get(std::string_view key) const;
  long long get_int(std::string_view key) const;
  double get_double(std::string_view key) const;
  bool get_bool(std::string_view key) const;

  std::string get_or(std::string_view key, std::string fallback) const;
  long long get_int_or(std::string_view key, long long fallback) const;
  double get_double_or(std::string_view key, double fallback) const;
  bool get_bool_or(std::string_view key, bool fallback) const;

  // Entries of `other` overwrite or extend this one.
  void merge(const Manifest& other);

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  std::string to_string() const;
  static Manifest from_string(std::string_view text);
  void write(const std::filesystem::path& path) const;
  static Manifest read(const std::filesystem::path& path);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

}  // namespace nrs

#endif  // NRS_UTIL_MANIFEST_HPP_
