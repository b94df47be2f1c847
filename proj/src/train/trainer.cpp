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


#include "nrs/train/trainer.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nrs/nn/checkpoint.hpp"
#include "nrs/nn/optim.hpp"
#include "nrs/util/random.hpp"

namespace nrs {
namespace {

std::vector<int> encode_target(const DatasetRecord& r, const Vocabulary& vocab) {
  if (r.target == kOmega) return {Vocabulary::kOmegaId};
  return vocab.encode(parse(r.target, r.domain));
}

std::vector<DatasetRecord> limited(const std::vector<DatasetRecord>& records, int limit) {
  if (limit <= 0 || records.size() <= static_cast<std::size_t>(limit)) return records;
  // Strided, so every nesting level keeps its share.
  std::vector<DatasetRecord> out;
  const double stride = static_cast<double>(records.size()) / limit;
  for (int i = 0; i < limit; ++i) out.push_back(records[static_cast<std::size_t>(i * stride)]);
  return out;
}

void check_leakage(const TrainConfig& cfg, const TrainData& data) {
  std::vector<DatasetRecord> held = data.id_val;
  held.insert(held.end(), data.ood_val.begin(), data.ood_val.end());
  if (cfg.module == ModuleKind::selector) held.insert(held.end(), data.exclude.begin(), data.exclude.end());
  if (shares_input(data.train, input_hashes(held))) {
    throw std::runtime_error("training records share inputs with held-out splits");
  }
}

Manifest checkpoint_manifest(const TrainConfig& cfg, const Vocabulary& vocab, const nn::ModelConfig& model,
                             const LogRow& row) {
  Manifest m = cfg.to_manifest();
  nn::write_model_config(m, model);
  m.set("checkpoint.kind", cfg.module == ModuleKind::selector && cfg.engine == EngineKind::fastnrs
                               ? "segmenter"
                               : "seq2seq");
  m.set("checkpoint.iteration", row.iteration);
  m.set("checkpoint.loss", row.loss);
  m.set("checkpoint.id_metric", row.id_metric);
  m.set("checkpoint.ood_metric", row.ood_metric);
  m.set("vocab.name", vocab.name());
  m.set("vocab.hash", std::to_string(vocab.hash()));
  return m;
}

template <typename Store>
bool all_finite(Store& store) {
  for (const auto& p : store.all()) {
    if (!p.value.allFinite()) return false;
  }
  return true;
}

// Shared optimisation loop. step(indices, rng) runs forward and backward and
// returns the loss; metrics() returns (id, ood).
template <typename Store, typename StepFn, typename MetricFn>
TrainResult run_loop(const TrainConfig& cfg, const Vocabulary& vocab, const nn::ModelConfig& model_cfg, Store& store,
                     const BatchComposer& composer, StepFn step, MetricFn metrics,
                     const std::filesystem::path& out, const ProgressFn& progress) {
  const auto t0 = std::chrono::steady_clock::now();
  std::filesystem::create_directories(out);
  nn::Adam<float> opt(store);
  const nn::WarmupCosine schedule{cfg.learning_rate, cfg.warmup, cfg.iterations};
  Rng noise(Rng::derive(cfg.seed, 2));
  TrainResult result;
  double loss_sum = 0.0;
  int loss_count = 0;
  for (int it = 0; it < cfg.iterations; ++it) {
    const auto indices = composer.batch(static_cast<std::uint64_t>(it), cfg.batch_size);
    store.zero_grad();
    const double loss = step(indices, noise);
    if (!std::isfinite(loss)) {
      result.diverged = true;
      break;
    }
    opt.step(schedule(it), cfg.clip);
    if (!all_finite(store)) {
      result.diverged = true;
      break;
    }
    loss_sum += loss;
    ++loss_count;
    const int done = it + 1;
    if (done % cfg.checkpoint_every != 0 && done != cfg.iterations) continue;
    const auto [id, ood] = metrics();
    LogRow row{done, loss_sum / loss_count, id, ood};
    loss_sum = 0.0;
    loss_count = 0;
    const auto dir = out / ("iter_" + std::to_string(done));
    std::filesystem::create_directories(dir);
    nn::save_weights(store, dir / "weights.bin");
    checkpoint_manifest(cfg, vocab, model_cfg, row).write(dir / "manifest.txt");
    result.checkpoints.push_back(Checkpoint{dir, done, id, ood});
    result.log.push_back(row);
    std::ofstream(out / "log.csv") << log_csv(result.log);
    if (progress) progress(row);
  }
  std::ofstream(out / "log.csv") << log_csv(result.log);
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

TrainResult train_segmentation(const TrainConfig& cfg, const TrainData& data, const std::filesystem::path& out,
                               const ProgressFn& progress) {
  const Vocabulary vocab = cfg.vocabulary();
  nn::ModelConfig mc = cfg.model;
  mc.vocab_size = vocab.size();
  Rng init(cfg.seed);
  nn::SegmenterModel<float> model(mc, init);
  const MaskSet train = encode_segmentation(data.train, vocab);
  const MaskSet id = encode_segmentation(limited(data.id_val, cfg.val_limit), vocab);
  const MaskSet ood = encode_segmentation(limited(data.ood_val, cfg.val_limit), vocab);
  const BatchComposer composer = BatchComposer::by_nesting(data.train, Rng::derive(cfg.seed, 1));
  const std::uint64_t eval_seed = Rng::derive(cfg.seed, 3);

  auto step = [&](const std::vector<std::size_t>& idx, Rng& rng) {
    std::vector<std::vector<int>> x;
    std::vector<std::vector<int>> y;
    for (auto i : idx) {
      x.push_back(train.inputs[i]);
      y.push_back(train.masks[i]);
    }
    return model.forward_backward(x, y, cfg.labels, rng);
  };
  auto metrics = [&] {
    const double a = exact_mask_accuracy(model, id, cfg.labels, eval_seed);
    const double b = ood.inputs.empty() ? a : exact_mask_accuracy(model, ood, cfg.labels, eval_seed);
    return std::pair{a, b};
  };
  return run_loop(cfg, vocab, mc, model.parameters(), composer, step, metrics, out, progress);
}

TrainResult train_seq2seq(const TrainConfig& cfg, const TrainData& data, const std::filesystem::path& out,
                          const ProgressFn& progress) {
  const Vocabulary vocab = cfg.vocabulary();
  nn::ModelConfig mc = cfg.model;
  mc.vocab_size = vocab.size();
  Rng init(cfg.seed);
  nn::Seq2SeqModel<float> model(mc, init);
  const auto train = encode_seq2seq(data.train, vocab);
  const auto id = encode_seq2seq(limited(data.id_val, cfg.val_limit), vocab);
  const auto ood = encode_seq2seq(limited(data.ood_val, cfg.val_limit), vocab);
  const BatchComposer composer = cfg.module == ModuleKind::solver
                                     ? BatchComposer::solver_mix(data.train, Rng::derive(cfg.seed, 1))
                                     : BatchComposer::by_nesting(data.train, Rng::derive(cfg.seed, 1));
  const std::uint64_t eval_seed = Rng::derive(cfg.seed, 3);

  auto step = [&](const std::vector<std::size_t>& idx, Rng& rng) {
    std::vector<nn::SeqPair> batch;
    for (auto i : idx) batch.push_back(train[i]);
    return model.forward_backward(batch, cfg.labels, rng);
  };
  auto metrics = [&] {
    const double a = exact_sequence_accuracy(model, id, cfg.labels, eval_seed);
    const double b = ood.empty() ? a : exact_sequence_accuracy(model, ood, cfg.labels, eval_seed);
    return std::pair{a, b};
  };
  return run_loop(cfg, vocab, mc, model.parameters(), composer, step, metrics, out, progress);
}

}  // namespace

MaskSet encode_segmentation(const std::vector<DatasetRecord>& records, const Vocabulary& vocab) {
  MaskSet out;
  for (const auto& r : records) {
    out.inputs.push_back(vocab.encode(parse(r.input, r.domain)));
    std::vector<int> mask;
    for (char c : r.target) mask.push_back(c == '1');
    if (mask.size() != out.inputs.back().size()) throw std::invalid_argument("mask length mismatch: " + r.input);
    out.masks.push_back(std::move(mask));
  }
  return out;
}

std::vector<nn::SeqPair> encode_seq2seq(const std::vector<DatasetRecord>& records, const Vocabulary& vocab) {
  std::vector<nn::SeqPair> out;
  for (const auto& r : records) out.push_back(nn::SeqPair{vocab.encode(parse(r.input, r.domain)), encode_target(r, vocab)});
  return out;
}

double exact_mask_accuracy(nn::SegmenterModel<float>& model, const MaskSet& set, nn::LabelMode labels,
                           std::uint64_t seed) {
  if (set.inputs.empty()) return 0.0;
  constexpr std::size_t kBatch = 128;
  std::size_t hits = 0;
  for (std::size_t b = 0; b < set.inputs.size(); b += kBatch) {
    const std::size_t e = std::min(set.inputs.size(), b + kBatch);
    std::vector<std::vector<int>> x(set.inputs.begin() + static_cast<std::ptrdiff_t>(b),
                                    set.inputs.begin() + static_cast<std::ptrdiff_t>(e));
    std::vector<std::vector<int>> lab;
    for (std::size_t i = b; i < e; ++i) {
      Rng rng(Rng::derive(seed, i));
      lab.push_back(model.encoder().labels(static_cast<int>(x[i - b].size()), labels, rng));
    }
    const auto probs = model.predict(x, lab);
    for (std::size_t i = b; i < e; ++i) hits += nn::threshold_mask(probs[i - b]) == set.masks[i];
  }
  return static_cast<double>(hits) / static_cast<double>(set.inputs.size());
}

double exact_sequence_accuracy(nn::Seq2SeqModel<float>& model, const std::vector<nn::SeqPair>& set,
                               nn::LabelMode labels, std::uint64_t seed) {
  if (set.empty()) return 0.0;
  constexpr std::size_t kBatch = 64;
  std::size_t hits = 0;
  for (std::size_t b = 0; b < set.size(); b += kBatch) {
    const std::size_t e = std::min(set.size(), b + kBatch);
    std::vector<std::vector<int>> x;
    std::vector<std::vector<int>> lab;
    std::vector<Rng> rngs;
    std::size_t longest = 0;
    for (std::size_t i = b; i < e; ++i) {
      x.push_back(set[i].source);
      Rng rng(Rng::derive(seed, i));
      lab.push_back(model.encoder().labels(static_cast<int>(set[i].source.size()), labels, rng));
      rngs.emplace_back(0);
      longest = std::max(longest, set[i].target.size());
    }
    const auto out = model.generate(x, lab, static_cast<int>(longest) + 1, nn::DecodeMode::greedy, rngs);
    for (std::size_t i = b; i < e; ++i) {
      std::vector<int> want = set[i].target;
      want.push_back(nn::Seq2SeqModel<float>::kEos);
      hits += out[i - b].tokens == want;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(set.size());
}

TrainResult train_module(const TrainConfig& config, const TrainData& data, const std::filesystem::path& out,
                         const ProgressFn& progress) {
  if (data.train.empty()) throw std::invalid_argument("empty training set");
  check_leakage(config, data);
  if (config.module == ModuleKind::selector && config.engine == EngineKind::fastnrs) {
    return train_segmentation(config, data, out, progress);
  }
  return train_seq2seq(config, data, out, progress);
}

const Checkpoint& select_model_on_ood(const std::vector<Checkpoint>& checkpoints) {
  if (checkpoints.empty()) throw std::invalid_argument("no checkpoints");
  const Checkpoint* best = &checkpoints.front();
  for (const auto& c : checkpoints) {
    if (c.ood_metric > best->ood_metric || (c.ood_metric == best->ood_metric && c.iteration < best->iteration)) {
      best = &c;
    }
  }
  return *best;
}

std::string log_csv(const std::vector<LogRow>& rows) {
  std::ostringstream os;
  os << "iteration,loss,id_metric,ood_metric\n";
  for (const auto& r : rows) {
    os << r.iteration << ',' << format_double(r.loss) << ',' << format_double(r.id_metric) << ','
       << format_double(r.ood_metric) << '\n';
  }
  return os.str();
}

void check_vocabulary(const Manifest& checkpoint, const Vocabulary& vocab) {
  if (checkpoint.get("vocab.name") != vocab.name() || checkpoint.get("vocab.hash") != std::to_string(vocab.hash())) {
    throw std::invalid_argument("checkpoint vocabulary " + checkpoint.get("vocab.name") + " does not match " +
                                vocab.name());
  }
}

LoadedSegmenter load_segmenter(const std::filesystem::path& dir) {
  Manifest m = Manifest::read(dir / "manifest.txt");
  if (m.get("checkpoint.kind") != "segmenter") throw std::invalid_argument(dir.string() + " is not a segmenter");
  Vocabulary vocab = Vocabulary::by_name(m.get("vocab.name"));
  check_vocabulary(m, vocab);
  Rng unused(0);
  auto model = std::make_unique<nn::SegmenterModel<float>>(nn::read_model_config(m), unused);
  nn::load_weights(model->parameters(), dir / "weights.bin");
  return LoadedSegmenter{std::move(m), std::move(vocab), std::move(model)};
}

LoadedSeq2Seq load_seq2seq(const std::filesystem::path& dir) {
  Manifest m = Manifest::read(dir / "manifest.txt");
  if (m.get("checkpoint.kind") != "seq2seq") throw std::invalid_argument(dir.string() + " is not a seq2seq model");
  Vocabulary vocab = Vocabulary::by_name(m.get("vocab.name"));
  check_vocabulary(m, vocab);
  Rng unused(0);
  auto model = std::make_unique<nn::Seq2SeqModel<float>>(nn::read_model_config(m), unused);
  nn::load_weights(model->parameters(), dir / "weights.bin");
  return LoadedSeq2Seq{std::move(m), std::move(vocab), std::move(model)};
}

}  // namespace nrs
