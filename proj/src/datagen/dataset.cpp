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

#include "nrs/datagen/dataset.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <span>
#include <stdexcept>

#include "json.hpp"
#include "nrs/datagen/generator.hpp"

namespace nrs {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::uint64_t kTestStream = 1;
constexpr std::uint64_t kTrainStream = 2;
constexpr std::uint64_t kIdValStream = 3;
constexpr std::uint64_t kOodValStream = 4;
constexpr std::uint64_t kSolverStream = 5;
// Consecutive duplicate draws after which a small space counts as exhausted.
constexpr long long kStallLimit = 2000;

// Rendered-string set with insertion order preserved by the caller.
class Seen {
 public:
  bool contains(const std::string& s) const { return set_.count(s) != 0; }
  bool insert(const std::string& s) { return set_.insert(s).second; }

 private:
  std::unordered_set<std::string> set_;
};

GenSpec gen_spec(Domain domain, int nesting, std::uint64_t seed, const SplitSpec& spec) {
  GenSpec g;
  g.domain = domain;
  g.nesting = nesting;
  g.seed = seed;
  g.listops_min_args = spec.listops_min_args;
  g.listops_max_args = spec.listops_max_args;
  return g;
}

// Up to `count` unique formulas of one nesting level that are not in any
// of `excluded`, drawn from attempts seeded by (stream seed, attempt).
std::vector<Formula> draw_unique(Domain domain, int nesting, int count, std::uint64_t stream_seed,
                                 const SplitSpec& spec, std::initializer_list<const Seen*> excluded,
                                 Seen& taken) {
  std::vector<Formula> out;
  const long long attempts = static_cast<long long>(count) * spec.retry_factor;
  long long misses = 0;
  for (long long a = 0; a < attempts && static_cast<int>(out.size()) < count && misses < kStallLimit; ++a) {
    Formula f = generate_formula(gen_spec(domain, nesting, Rng::derive(stream_seed, static_cast<std::uint64_t>(a)), spec));
    const std::string text = f.render();
    bool skip = false;
    for (const Seen* e : excluded) skip = skip || e->contains(text);
    if (skip || !taken.insert(text)) {
      ++misses;
      continue;
    }
    misses = 0;
    out.push_back(std::move(f));
  }
  return out;
}

// The formula followed by every intermediate simplification and its value.
std::vector<Formula> with_intermediates(const Formula& f) {
  std::vector<Formula> chain{f};
  Reduction r = reduce_fully(f);
  chain.insert(chain.end(), r.steps.begin(), r.steps.end());
  return chain;
}

std::uint64_t level_seed(std::uint64_t seed, std::uint64_t stream, int nesting) {
  return Rng::derive(Rng::derive(seed, stream), static_cast<std::uint64_t>(nesting));
}

DatasetRecord make_record(const Formula& f, std::string target, int nesting, Split split, RecordMode mode) {
  return DatasetRecord{f.render(), std::move(target), nesting, split, f.domain(), mode};
}

}  // namespace

std::string_view split_name(Split split) {
  switch (split) {
    case Split::train: return "train";
    case Split::id_val: return "id_val";
    case Split::ood_val: return "ood_val";
    case Split::test: return "test";
  }
  return "?";
}

Split parse_split(std::string_view name) {
  for (Split s : {Split::train, Split::id_val, Split::ood_val, Split::test}) {
    if (split_name(s) == name) return s;
  }
  throw std::invalid_argument("unknown split: " + std::string(name));
}

std::string_view record_mode_name(RecordMode mode) {
  switch (mode) {
    case RecordMode::seq2seq: return "seq2seq";
    case RecordMode::segmentation: return "segmentation";
    case RecordMode::solver: return "solver";
    case RecordMode::end_to_end: return "end_to_end";
  }
  return "?";
}

RecordMode parse_record_mode(std::string_view name) {
  for (RecordMode m : {RecordMode::seq2seq, RecordMode::segmentation, RecordMode::solver, RecordMode::end_to_end}) {
    if (record_mode_name(m) == name) return m;
  }
  throw std::invalid_argument("unknown record mode: " + std::string(name));
}

SplitSpec SplitSpec::desk(Domain domain) {
  SplitSpec s;
  switch (domain) {
    case Domain::logic:
      s.id_val_per_nesting = 80;
      break;
    case Domain::listops:
      s.solver_train = 2000;
      s.solver_val = 500;
      break;
    case Domain::arithmetic:
      s.solver_train = 30000;
      s.solver_val = 7500;
      break;
    case Domain::algebra:
      s.solver_train = 19000;
      s.solver_val = 4750;
      break;
  }
  return s;
}

LeafSpan last_leaf(const Formula& formula) {
  auto spans = find_leaf_spans(formula);
  if (spans.empty()) return LeafSpan{0, formula.size(), formula.tokens()};
  return spans.back();
}

std::string segmentation_target(const Formula& formula) {
  std::string mask(formula.size(), '0');
  for (const LeafSpan& span : find_leaf_spans(formula)) {
    for (std::size_t i = span.start; i < span.end; ++i) mask[i] = '1';
  }
  return mask;
}

SelectorInputs build_selector_inputs(Domain domain, const SplitSpec& spec, std::uint64_t seed) {
  const DomainSpec& ds = DomainSpec::of(domain);
  SelectorInputs in;
  Seen test_seen, train_seen, id_seen, ood_seen;

  for (int n = 1; n <= ds.test_nesting_ceiling; ++n) {
    auto drawn = draw_unique(domain, n, spec.test_per_nesting, level_seed(seed, kTestStream, n), spec, {},
                             test_seen);
    if (static_cast<int>(drawn.size()) < spec.test_per_nesting) {
      throw std::runtime_error("test set: nesting " + std::to_string(n) + " space exhausted");
    }
    in.test_inputs.insert(in.test_inputs.end(), drawn.begin(), drawn.end());
  }

  // Top-level formulas are kept unique among themselves; their reduction
  // chains are deduplicated into the split.
  auto fill = [&](std::vector<Formula>& out, Seen& seen, std::uint64_t stream, int per_nesting,
                  std::initializer_list<const Seen*> excluded) {
    Seen top;
    for (int n = 1; n <= ds.max_train_nesting; ++n) {
      for (const Formula& f : draw_unique(domain, n, per_nesting, level_seed(seed, stream, n), spec, excluded, top)) {
        for (Formula& g : with_intermediates(f)) {
          const std::string text = g.render();
          bool skip = false;
          for (const Seen* e : excluded) skip = skip || e->contains(text);
          if (!skip && seen.insert(text)) out.push_back(std::move(g));
        }
      }
    }
  };
  fill(in.train, train_seen, kTrainStream, spec.train_per_nesting, {&test_seen});
  fill(in.id_val, id_seen, kIdValStream, spec.id_val_per_nesting, {&test_seen, &train_seen});

  // OOD: records whose own depth is 4..6, equal count per depth. Top-level
  // depths cycle so deeper formulas also contribute their depth-4/5
  // intermediates.
  std::map<int, std::vector<Formula>> buckets;
  for (int n : ds.ood_nesting) buckets[n];
  const long long attempts = static_cast<long long>(spec.ood_val_per_nesting) * spec.retry_factor *
                             static_cast<long long>(ds.ood_nesting.size());
  auto full = [&] {
    for (auto& [n, b] : buckets) {
      if (static_cast<int>(b.size()) < spec.ood_val_per_nesting) return false;
    }
    return true;
  };
  const std::uint64_t ood_seed = Rng::derive(seed, kOodValStream);
  for (long long a = 0; a < attempts && !full(); ++a) {
    const int n = ds.ood_nesting[static_cast<std::size_t>(a) % ds.ood_nesting.size()];
    Formula top = generate_formula(gen_spec(domain, n, Rng::derive(ood_seed, static_cast<std::uint64_t>(a)), spec));
    for (Formula& g : with_intermediates(top)) {
      const int depth = nesting_depth(g);
      auto it = buckets.find(depth);
      if (it == buckets.end() || static_cast<int>(it->second.size()) >= spec.ood_val_per_nesting) continue;
      const std::string text = g.render();
      if (test_seen.contains(text) || train_seen.contains(text) || id_seen.contains(text)) continue;
      if (ood_seen.insert(text)) it->second.push_back(std::move(g));
    }
  }
  for (auto& [n, b] : buckets) in.ood_val.insert(in.ood_val.end(), b.begin(), b.end());
  return in;
}

SelectorDataset selector_records(const SelectorInputs& inputs, Domain domain, SelectorMode mode) {
  (void)domain;
  auto convert = [&](const std::vector<Formula>& formulas, Split split) {
    std::vector<DatasetRecord> out;
    out.reserve(formulas.size());
    for (const Formula& f : formulas) {
      if (mode == SelectorMode::seq2seq) {
        const LeafSpan leaf = last_leaf(f);
        out.push_back(make_record(f, render_tokens(f.domain(), leaf.tokens), nesting_depth(f), split,
                                  RecordMode::seq2seq));
      } else {
        out.push_back(make_record(f, segmentation_target(f), nesting_depth(f), split, RecordMode::segmentation));
      }
    }
    return out;
  };
  return SelectorDataset{convert(inputs.train, Split::train), convert(inputs.id_val, Split::id_val),
                         convert(inputs.ood_val, Split::ood_val)};
}

SelectorDataset build_selector_dataset(Domain domain, SelectorMode mode, const SplitSpec& spec,
                                       std::uint64_t seed) {
  return selector_records(build_selector_inputs(domain, spec, seed), domain, mode);
}

std::vector<DatasetRecord> test_records(const SelectorInputs& inputs, Domain domain) {
  (void)domain;
  std::vector<DatasetRecord> out;
  out.reserve(inputs.test_inputs.size());
  for (const Formula& f : inputs.test_inputs) {
    out.push_back(make_record(f, reduce_fully(f).value.render(), nesting_depth(f), Split::test,
                              RecordMode::end_to_end));
  }
  return out;
}

std::vector<DatasetRecord> build_test_set(Domain domain, const SplitSpec& spec, std::uint64_t seed) {
  // Only the test stream is needed; the dev splits are built after it and
  // cannot change it.
  SplitSpec only_test = spec;
  only_test.train_per_nesting = 0;
  only_test.id_val_per_nesting = 0;
  only_test.ood_val_per_nesting = 0;
  return test_records(build_selector_inputs(domain, only_test, seed), domain);
}

SolverDataset build_solver_dataset(Domain domain, const SplitSpec& spec, std::uint64_t seed) {
  Rng rng = Rng::substream(seed, kSolverStream);
  std::vector<Formula> leaves;
  if (domain == Domain::logic) {
    leaves = enumerate_logic_leaves();
  } else {
    Seen seen;
    leaves = draw_unique(domain, 1, spec.solver_train + spec.solver_val, Rng::derive(seed, kSolverStream + 100),
                         spec, {}, seen);
  }
  std::vector<Formula> atoms = enumerate_atoms(domain);
  rng.shuffle(std::span<Formula>(leaves));
  rng.shuffle(std::span<Formula>(atoms));

  const double val_fraction =
      domain == Domain::logic
          ? spec.logic_solver_val_fraction
          : static_cast<double>(spec.solver_val) / std::max(1, spec.solver_train + spec.solver_val);
  SolverDataset out;
  auto split_into = [&](const std::vector<Formula>& items, int nesting) {
    const auto n_val = static_cast<std::size_t>(std::llround(val_fraction * static_cast<double>(items.size())));
    for (std::size_t i = 0; i < items.size(); ++i) {
      const Split split = i < n_val ? Split::id_val : Split::train;
      DatasetRecord r = make_record(items[i], apply_rule(items[i]).render(), nesting, split, RecordMode::solver);
      (split == Split::train ? out.train : out.id_val).push_back(std::move(r));
    }
  };
  split_into(leaves, 1);
  split_into(atoms, 0);
  return out;
}

BatchComposer::BatchComposer(std::vector<std::vector<std::size_t>> groups, std::uint64_t seed)
    : seed_(seed) {
  for (auto& g : groups) {
    if (!g.empty()) groups_.push_back(std::move(g));
  }
  if (groups_.empty()) throw std::invalid_argument("batch composer needs a non-empty group");
  std::size_t max_index = 0;
  for (const auto& g : groups_) {
    for (std::size_t i : g) max_index = std::max(max_index, i);
  }
  group_index_.assign(max_index + 1, 0);
  for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
    for (std::size_t i : groups_[gi]) group_index_[i] = gi;
  }
}

BatchComposer BatchComposer::by_nesting(const std::vector<DatasetRecord>& records, std::uint64_t seed) {
  std::map<std::pair<int, int>, std::vector<std::size_t>> keyed;
  for (std::size_t i = 0; i < records.size(); ++i) {
    keyed[{static_cast<int>(records[i].domain), records[i].nesting}].push_back(i);
  }
  std::vector<std::vector<std::size_t>> groups;
  for (auto& [k, v] : keyed) groups.push_back(std::move(v));
  return BatchComposer(std::move(groups), seed);
}

BatchComposer BatchComposer::solver_mix(const std::vector<DatasetRecord>& records, std::uint64_t seed) {
  std::map<std::pair<int, bool>, std::vector<std::size_t>> keyed;
  for (std::size_t i = 0; i < records.size(); ++i) {
    keyed[{static_cast<int>(records[i].domain), records[i].target == kOmega}].push_back(i);
  }
  std::vector<std::vector<std::size_t>> groups;
  for (auto& [k, v] : keyed) groups.push_back(std::move(v));
  return BatchComposer(std::move(groups), seed);
}

std::vector<std::size_t> BatchComposer::batch(std::uint64_t index, int size) const {
  Rng rng = Rng::substream(seed_, index);
  std::vector<std::size_t> out;
  out.reserve(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) {
    const auto& g = groups_[rng.index(groups_.size())];
    out.push_back(g[rng.index(g.size())]);
  }
  return out;
}

std::size_t BatchComposer::group_of(std::size_t record) const { return group_index_.at(record); }

std::unordered_set<std::uint64_t> input_hashes(const std::vector<DatasetRecord>& records) {
  std::unordered_set<std::uint64_t> out;
  for (const auto& r : records) out.insert(fnv1a(r.input));
  return out;
}

bool shares_input(const std::vector<DatasetRecord>& records, const std::unordered_set<std::uint64_t>& hashes) {
  return std::any_of(records.begin(), records.end(),
                     [&](const DatasetRecord& r) { return hashes.count(fnv1a(r.input)) != 0; });
}

void write_jsonl(const std::filesystem::path& path, const std::vector<DatasetRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& r : records) {
    Json j;
    j["input"] = r.input;
    j["target"] = r.target;
    j["nesting"] = r.nesting;
    j["split"] = split_name(r.split);
    j["domain"] = domain_name(r.domain);
    j["mode"] = record_mode_name(r.mode);
    out << j.dump() << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::vector<DatasetRecord> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<DatasetRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const Json j = Json::parse(line);
    out.push_back(DatasetRecord{j.at("input").get<std::string>(), j.at("target").get<std::string>(),
                                j.at("nesting").get<int>(), parse_split(j.at("split").get<std::string>()),
                                parse_domain(j.at("domain").get<std::string>()),
                                parse_record_mode(j.at("mode").get<std::string>())});
  }
  return out;
}

DatagenOutput generate_datasets(const std::vector<Domain>& domains, std::uint64_t seed, bool multi_domain,
                                const SplitSpec* override_spec) {
  DatagenOutput out;
  Manifest& m = out.manifest;
  m.set("format_version", kDatasetFormatVersion);
  m.set("seed", static_cast<long long>(seed));
  m.set("multi_domain", multi_domain);
  std::string names;
  for (Domain d : domains) names += (names.empty() ? "" : ",") + std::string(domain_name(d));
  m.set("domains", names);
  m.set("selector_tokenizer", multi_domain ? "formula_level_multi" : "formula_level");
  m.set("solver_tokenizer", multi_domain ? "character_level_multi" : "character_level");
  m.set("batching", "uniform over (domain, nesting) groups, then uniform within group");
  m.set("solver_batching", "uniform over (domain, leaf|atom) groups, then uniform within group");
  m.set("split_build_order", "test,train,id_val,ood_val");
  m.set("ood_val_balance", "equal records per own nesting depth");
  m.set("modulo_convention", "truncated");

  std::map<std::string, std::vector<DatasetRecord>> merged;
  std::vector<std::string> order;
  auto add = [&](const std::string& name, std::vector<DatasetRecord> records) {
    if (!merged.count(name)) order.push_back(name);
    auto& dst = merged[name];
    dst.insert(dst.end(), std::make_move_iterator(records.begin()), std::make_move_iterator(records.end()));
  };

  for (Domain d : domains) {
    const SplitSpec spec = override_spec ? *override_spec : SplitSpec::desk(d);
    // Domains draw from distinct streams of the same seed.
    const std::uint64_t dseed = Rng::derive(seed, 1000 + static_cast<std::uint64_t>(d));
    const SelectorInputs inputs = build_selector_inputs(d, spec, dseed);
    SelectorDataset s2s = selector_records(inputs, d, SelectorMode::seq2seq);
    SelectorDataset seg = selector_records(inputs, d, SelectorMode::segmentation);
    SolverDataset solver = build_solver_dataset(d, spec, dseed);
    std::vector<DatasetRecord> test = test_records(inputs, d);

    const std::string dn(domain_name(d));
    m.set(dn + ".listops_args", std::to_string(spec.listops_min_args) + "-" + std::to_string(spec.listops_max_args));
    auto count = [&](const std::string& key, const std::vector<DatasetRecord>& records) {
      m.set(dn + "." + key + ".count", records.size());
      std::map<int, int> per;
      for (const auto& r : records) ++per[r.nesting];
      for (auto [n, c] : per) m.set(dn + "." + key + ".nesting" + std::to_string(n), c);
    };
    count("selector.train", s2s.train);
    count("selector.id_val", s2s.id_val);
    count("selector.ood_val", s2s.ood_val);
    count("solver.train", solver.train);
    count("solver.id_val", solver.id_val);
    count("test", test);

    add("selector_seq2seq.train", std::move(s2s.train));
    add("selector_seq2seq.id_val", std::move(s2s.id_val));
    add("selector_seq2seq.ood_val", std::move(s2s.ood_val));
    add("selector_segmentation.train", std::move(seg.train));
    add("selector_segmentation.id_val", std::move(seg.id_val));
    add("selector_segmentation.ood_val", std::move(seg.ood_val));
    add("solver.train", std::move(solver.train));
    add("solver.id_val", std::move(solver.id_val));
    add("test", std::move(test));
  }
  for (const auto& name : order) out.files.emplace_back(name, std::move(merged[name]));
  return out;
}

void write_datasets(const DatagenOutput& output, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, records] : output.files) write_jsonl(dir / (name + ".jsonl"), records);
  output.manifest.write(dir / "manifest.txt");
}

}  // namespace nrs
