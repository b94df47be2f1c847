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

#ifndef NRS_DATAGEN_DATASET_HPP_
#define NRS_DATAGEN_DATASET_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "nrs/term/formula.hpp"
#include "nrs/term/rewrite.hpp"
#include "nrs/util/manifest.hpp"
#include "nrs/util/random.hpp"

namespace nrs {

inline constexpr int kDatasetFormatVersion = 1;

enum class Split { train, id_val, ood_val, test };

// The "mode" field of a record.
enum class RecordMode { seq2seq, segmentation, solver, end_to_end };

enum class SelectorMode { seq2seq, segmentation };

std::string_view split_name(Split split);
Split parse_split(std::string_view name);
std::string_view record_mode_name(RecordMode mode);
RecordMode parse_record_mode(std::string_view name);

struct DatasetRecord {
  std::string input;
  // Last leaf (seq2seq), '0'/'1' per input token (segmentation), value or ω
  // (solver), or the final value (end_to_end).
  std::string target;
  int nesting = 0;
  Split split = Split::train;
  Domain domain = Domain::logic;
  RecordMode mode = RecordMode::seq2seq;

  friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

// Unique-sample targets of one domain's splits.
struct SplitSpec {
  // Top-level formulas drawn per nesting level 1..3; their intermediate
  // simplifications and final values are added as records.
  int train_per_nesting = 20000;
  int id_val_per_nesting = 80;
  // Records per OOD nesting level 4..6.
  int ood_val_per_nesting = 300;
  int test_per_nesting = 100;
  // Solver leaves and atoms. Logic ignores the counts and enumerates the
  // rule space exhaustively.
  int solver_train = 30000;
  int solver_val = 7500;
  double logic_solver_val_fraction = 0.225;
  int listops_min_args = 2;
  int listops_max_args = 2;

  // Draws per requested unique sample before giving up on a small space.
  int retry_factor = 50;

  static SplitSpec desk(Domain domain);
};

// Last leaf span of a formula; the whole formula when atomic or when no
// bracket pair closes.
LeafSpan last_leaf(const Formula& formula);
// '1' on every token of every leaf span.
std::string segmentation_target(const Formula& formula);

// Inputs of the Selector development splits and of the test set. Built in a
// fixed order (test, train, id_val, ood_val); every split excludes the
// inputs of the splits built before it.
struct SelectorInputs {
  std::vector<Formula> test_inputs;
  std::vector<Formula> train;
  std::vector<Formula> id_val;
  std::vector<Formula> ood_val;
};

SelectorInputs build_selector_inputs(Domain domain, const SplitSpec& spec, std::uint64_t seed);

struct SelectorDataset {
  std::vector<DatasetRecord> train;
  std::vector<DatasetRecord> id_val;
  std::vector<DatasetRecord> ood_val;
};

SelectorDataset build_selector_dataset(Domain domain, SelectorMode mode, const SplitSpec& spec,
                                       std::uint64_t seed);
SelectorDataset selector_records(const SelectorInputs& inputs, Domain domain, SelectorMode mode);

struct SolverDataset {
  std::vector<DatasetRecord> train;
  std::vector<DatasetRecord> id_val;
};

SolverDataset build_solver_dataset(Domain domain, const SplitSpec& spec, std::uint64_t seed);

std::vector<DatasetRecord> build_test_set(Domain domain, const SplitSpec& spec, std::uint64_t seed);
std::vector<DatasetRecord> test_records(const SelectorInputs& inputs, Domain domain);

// Uniform over groups, then uniform within the chosen group. Batches are
// seeded by (seed, batch index), so batch i is independent of batch i-1.
class BatchComposer {
 public:
  BatchComposer(std::vector<std::vector<std::size_t>> groups, std::uint64_t seed);

  // Groups keyed by (domain, nesting) for Selector records.
  static BatchComposer by_nesting(const std::vector<DatasetRecord>& records, std::uint64_t seed);
  // Groups keyed by (domain, leaf vs atom) for Solver records.
  static BatchComposer solver_mix(const std::vector<DatasetRecord>& records, std::uint64_t seed);

  std::vector<std::size_t> batch(std::uint64_t index, int size) const;
  // Group index of a record.
  std::size_t group_of(std::size_t record) const;
  std::size_t group_count() const { return groups_.size(); }
  const std::vector<std::vector<std::size_t>>& groups() const { return groups_; }

 private:
  std::vector<std::vector<std::size_t>> groups_;
  std::vector<std::size_t> group_index_;
  std::uint64_t seed_;
};

// Hashes of rendered inputs, for leakage checks.
std::unordered_set<std::uint64_t> input_hashes(const std::vector<DatasetRecord>& records);
bool shares_input(const std::vector<DatasetRecord>& records,
                  const std::unordered_set<std::uint64_t>& hashes);

void write_jsonl(const std::filesystem::path& path, const std::vector<DatasetRecord>& records);
std::vector<DatasetRecord> read_jsonl(const std::filesystem::path& path);

// Everything `datagen` writes for one domain (or for all four).
struct DatagenOutput {
  Manifest manifest;
  std::vector<std::pair<std::string, std::vector<DatasetRecord>>> files;
};

DatagenOutput generate_datasets(const std::vector<Domain>& domains, std::uint64_t seed, bool multi_domain,
                                const SplitSpec* override_spec = nullptr);
void write_datasets(const DatagenOutput& output, const std::filesystem::path& dir);

}  // namespace nrs

#endif  // NRS_DATAGEN_DATASET_HPP_
