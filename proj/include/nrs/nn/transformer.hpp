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

#ifndef NRS_NN_TRANSFORMER_HPP_
#define NRS_NN_TRANSFORMER_HPP_

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "nrs/nn/layers.hpp"
#include "nrs/nn/positional.hpp"
#include "nrs/nn/sampling.hpp"
#include "nrs/nn/tensor.hpp"

namespace nrs::nn {

struct ModelConfig {
  int vocab_size = 0;
  int embedding = 128;
  int encoder_layers = 2;
  int decoder_layers = 2;
  int heads = 4;
  int feedforward = 512;
  double dropout = 0.1;
  // Half-width k of the encoder self-attention window; 0 disables the mask.
  int window = 1;
  // Positional table size N.
  int max_length = 1024;
  double attention_gain = 1.0;

  AttentionMaskConfig encoder_mask() const {
    return window > 0 ? AttentionMaskConfig{MaskKind::diagonal, window} : AttentionMaskConfig{};
  }
};

// Post-LN encoder block.
template <typename S>
class EncoderLayer {
 public:
  EncoderLayer(ParameterStore<S>& store, const std::string& name, const ModelConfig& cfg, Rng& rng)
      : attn_(store, name + ".attn", cfg.embedding, cfg.heads, rng, cfg.attention_gain),
        norm1_(store, name + ".norm1", cfg.embedding),
        ffn_(store, name + ".ffn", cfg.embedding, cfg.feedforward, cfg.dropout, rng),
        norm2_(store, name + ".norm2", cfg.embedding), drop1_(cfg.dropout), drop2_(cfg.dropout) {}

  Matrix<S> forward(const Matrix<S>& x, const Layout& layout, AttentionMaskConfig mask, bool training,
                    Rng& rng) {
    Matrix<S> a = attn_.forward(x, layout, x, layout, mask);
    Matrix<S> h = norm1_.forward(x + drop1_.forward(a, training, rng));
    Matrix<S> f = ffn_.forward(h, training, rng);
    return norm2_.forward(h + drop2_.forward(f, training, rng));
  }

  Matrix<S> backward(const Matrix<S>& dy) {
    Matrix<S> d2 = norm2_.backward(dy);
    Matrix<S> dh = d2 + ffn_.backward(drop2_.backward(d2));
    Matrix<S> d1 = norm1_.backward(dh);
    auto [dq, dkv] = attn_.backward(drop1_.backward(d1));
    return d1 + dq + dkv;
  }

  const MultiHeadAttention<S>& attention() const { return attn_; }

 private:
  MultiHeadAttention<S> attn_;
  LayerNorm<S> norm1_;
  FeedForward<S> ffn_;
  LayerNorm<S> norm2_;
  Dropout<S> drop1_;
  Dropout<S> drop2_;
};

// Post-LN decoder block: causal self-attention, cross-attention, FFN.
template <typename S>
class DecoderLayer {
 public:
  DecoderLayer(ParameterStore<S>& store, const std::string& name, const ModelConfig& cfg, Rng& rng)
      : self_(store, name + ".self", cfg.embedding, cfg.heads, rng, cfg.attention_gain),
        norm1_(store, name + ".norm1", cfg.embedding),
        cross_(store, name + ".cross", cfg.embedding, cfg.heads, rng, cfg.attention_gain),
        norm2_(store, name + ".norm2", cfg.embedding),
        ffn_(store, name + ".ffn", cfg.embedding, cfg.feedforward, cfg.dropout, rng),
        norm3_(store, name + ".norm3", cfg.embedding), drop1_(cfg.dropout), drop2_(cfg.dropout),
        drop3_(cfg.dropout) {}

  Matrix<S> forward(const Matrix<S>& x, const Layout& layout, const Matrix<S>& memory,
                    const Layout& memory_layout, bool training, Rng& rng) {
    Matrix<S> a = self_.forward(x, layout, x, layout, {MaskKind::causal, 0});
    Matrix<S> h1 = norm1_.forward(x + drop1_.forward(a, training, rng));
    Matrix<S> c = cross_.forward(h1, layout, memory, memory_layout, {});
    Matrix<S> h2 = norm2_.forward(h1 + drop2_.forward(c, training, rng));
    Matrix<S> f = ffn_.forward(h2, training, rng);
    return norm3_.forward(h2 + drop3_.forward(f, training, rng));
  }

  // Returns d input; adds the memory gradient into d_memory.
  Matrix<S> backward(const Matrix<S>& dy, Matrix<S>& d_memory) {
    Matrix<S> d3 = norm3_.backward(dy);
    Matrix<S> dh2 = d3 + ffn_.backward(drop3_.backward(d3));
    Matrix<S> d2 = norm2_.backward(dh2);
    auto [dq, dm] = cross_.backward(drop2_.backward(d2));
    d_memory += dm;
    Matrix<S> dh1 = d2 + dq;
    Matrix<S> d1 = norm1_.backward(dh1);
    auto [sq, skv] = self_.backward(drop1_.backward(d1));
    return d1 + sq + skv;
  }

 private:
  MultiHeadAttention<S> self_;
  LayerNorm<S> norm1_;
  MultiHeadAttention<S> cross_;
  LayerNorm<S> norm2_;
  FeedForward<S> ffn_;
  LayerNorm<S> norm3_;
  Dropout<S> drop1_, drop2_, drop3_;
};

template <typename S>
Matrix<S> pack_rows(const std::vector<Matrix<S>>& parts) {
  Eigen::Index rows = 0;
  for (const auto& m : parts) rows += m.rows();
  Matrix<S> out(rows, parts.empty() ? 0 : parts.front().cols());
  Eigen::Index r = 0;
  for (const auto& m : parts) {
    out.middleRows(r, m.rows()) = m;
    r += m.rows();
  }
  return out;
}

template <typename S>
class Encoder {
 public:
  Encoder(ParameterStore<S>& store, const std::string& name, const ModelConfig& cfg, Rng& rng)
      : cfg_(cfg), embedding_(store, name + ".embedding", cfg.vocab_size, cfg.embedding, rng),
        positions_(store, name + ".positions", cfg.max_length, cfg.embedding), drop_(cfg.dropout) {
    for (int i = 0; i < cfg.encoder_layers; ++i) {
      layers_.emplace_back(store, name + ".layer" + std::to_string(i), cfg, rng);
    }
  }

  // Token embedding plus the table rows at the given labels.
  Matrix<S> embed(const std::vector<std::vector<int>>& seqs,
                  const std::vector<std::vector<int>>& labels) {
    std::vector<int> flat;
    std::vector<int> flat_labels;
    std::vector<int> lengths;
    for (std::size_t i = 0; i < seqs.size(); ++i) {
      if (seqs[i].size() != labels[i].size()) throw std::invalid_argument("label count mismatch");
      if (static_cast<int>(seqs[i].size()) > cfg_.max_length) {
        throw std::length_error("input longer than positional table");
      }
      flat.insert(flat.end(), seqs[i].begin(), seqs[i].end());
      flat_labels.insert(flat_labels.end(), labels[i].begin(), labels[i].end());
      lengths.push_back(static_cast<int>(seqs[i].size()));
    }
    layout_ = Layout::from_lengths(lengths);
    return embedding_.forward(flat) + positions_.rows(flat_labels);
  }

  Matrix<S> forward(const std::vector<std::vector<int>>& seqs,
                    const std::vector<std::vector<int>>& labels, bool training, Rng& rng) {
    Matrix<S> x = drop_.forward(embed(seqs, labels), training, rng);
    for (auto& layer : layers_) x = layer.forward(x, layout_, cfg_.encoder_mask(), training, rng);
    return x;
  }

  void backward(const Matrix<S>& dy) {
    Matrix<S> d = dy;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) d = it->backward(d);
    embedding_.backward(drop_.backward(d));
  }

  const Layout& layout() const { return layout_; }
  const LabelPositionalEncoder<S>& positions() const { return positions_; }
  const std::vector<EncoderLayer<S>>& layers() const { return layers_; }

  std::vector<int> labels(int length, LabelMode mode, Rng& rng) const {
    return positions_.labels(length, mode, rng);
  }

 private:
  ModelConfig cfg_;
  Embedding<S> embedding_;
  LabelPositionalEncoder<S> positions_;
  Dropout<S> drop_;
  std::vector<EncoderLayer<S>> layers_;
  Layout layout_;
};

// Encoder with a per-token binary classification head.
template <typename S>
class SegmenterModel {
 public:
  explicit SegmenterModel(const ModelConfig& cfg, Rng& rng)
      : cfg_(cfg), encoder_(store_, "encoder", cfg, rng), head_(store_, "head", cfg.embedding, 1, rng) {}

  // Mean binary cross-entropy over all tokens; accumulates gradients.
  double forward_backward(const std::vector<std::vector<int>>& seqs,
                          const std::vector<std::vector<int>>& targets, LabelMode mode, Rng& rng) {
    auto labels = draw_labels(seqs, mode, rng);
    Matrix<S> h = encoder_.forward(seqs, labels, true, rng);
    Matrix<S> logits = head_.forward(h);
    Matrix<S> dlogits(logits.rows(), 1);
    const auto n = static_cast<double>(logits.rows());
    double loss = 0.0;
    Eigen::Index r = 0;
    for (const auto& t : targets) {
      for (int y : t) {
        const double z = static_cast<double>(logits(r, 0));
        // log(1 + exp(-|z|)) form of the logistic loss.
        loss += std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
        const double p = 1.0 / (1.0 + std::exp(-z));
        dlogits(r, 0) = static_cast<S>((p - y) / n);
        ++r;
      }
    }
    encoder_.backward(head_.backward(dlogits));
    return loss / n;
  }

  // Positive-class probability per token.
  std::vector<std::vector<double>> predict(const std::vector<std::vector<int>>& seqs,
                                           const std::vector<std::vector<int>>& labels) {
    Rng unused(0);
    Matrix<S> logits = head_.apply(encoder_.forward(seqs, labels, false, unused));
    std::vector<std::vector<double>> out;
    const Layout& layout = encoder_.layout();
    for (int s = 0; s < layout.batch(); ++s) {
      std::vector<double> p;
      for (int i = 0; i < layout.length(s); ++i) {
        p.push_back(1.0 / (1.0 + std::exp(-static_cast<double>(logits(layout.start(s) + i, 0)))));
      }
      out.push_back(std::move(p));
    }
    return out;
  }

  std::vector<std::vector<int>> draw_labels(const std::vector<std::vector<int>>& seqs, LabelMode mode,
                                            Rng& rng) const {
    std::vector<std::vector<int>> labels;
    labels.reserve(seqs.size());
    for (const auto& s : seqs) labels.push_back(encoder_.labels(static_cast<int>(s.size()), mode, rng));
    return labels;
  }

  const ModelConfig& config() const { return cfg_; }
  ParameterStore<S>& parameters() { return store_; }
  Encoder<S>& encoder() { return encoder_; }

 private:
  ModelConfig cfg_;
  ParameterStore<S> store_;
  Encoder<S> encoder_;
  Linear<S> head_;
};

// 1 where p >= 0.5.
inline std::vector<int> threshold_mask(const std::vector<double>& probs) {
  std::vector<int> mask;
  mask.reserve(probs.size());
  for (double p : probs) mask.push_back(p >= 0.5 ? 1 : 0);
  return mask;
}

struct SeqPair {
  std::vector<int> source;
  // Target ids without <bos>/<eos>.
  std::vector<int> target;
};

template <typename S>
class Seq2SeqModel {
 public:
  static constexpr int kBos = 1;
  static constexpr int kEos = 2;

  explicit Seq2SeqModel(const ModelConfig& cfg, Rng& rng)
      : cfg_(cfg), encoder_(store_, "encoder", cfg, rng),
        target_embedding_(store_, "decoder.embedding", cfg.vocab_size, cfg.embedding, rng),
        output_(store_, "decoder.output", cfg.embedding, cfg.vocab_size, rng), drop_(cfg.dropout) {
    for (int i = 0; i < cfg.decoder_layers; ++i) {
      layers_.emplace_back(store_, "decoder.layer" + std::to_string(i), cfg, rng);
    }
  }

  // Teacher-forced mean token cross-entropy; accumulates gradients.
  double forward_backward(const std::vector<SeqPair>& batch, LabelMode mode, Rng& rng) {
    std::vector<std::vector<int>> src;
    std::vector<std::vector<int>> prefixes;
    std::vector<int> gold;
    for (const auto& ex : batch) {
      src.push_back(ex.source);
      std::vector<int> in{kBos};
      in.insert(in.end(), ex.target.begin(), ex.target.end());
      prefixes.push_back(std::move(in));
      gold.insert(gold.end(), ex.target.begin(), ex.target.end());
      gold.push_back(kEos);
    }
    auto labels = draw_labels(src, mode, rng);
    Matrix<S> memory = encoder_.forward(src, labels, true, rng);
    Matrix<S> hidden = decode_hidden(prefixes, memory, encoder_.layout(), true, rng);
    Matrix<S> logits = output_.forward(hidden);

    const auto n = static_cast<double>(gold.size());
    Matrix<S> dlogits(logits.rows(), logits.cols());
    double loss = 0.0;
    for (Eigen::Index r = 0; r < logits.rows(); ++r) {
      auto p = softmax(logits.row(r));
      loss -= std::log(std::max(p[static_cast<std::size_t>(gold[static_cast<std::size_t>(r)])], 1e-300));
      p[static_cast<std::size_t>(gold[static_cast<std::size_t>(r)])] -= 1.0;
      for (Eigen::Index c = 0; c < logits.cols(); ++c) {
        dlogits(r, c) = static_cast<S>(p[static_cast<std::size_t>(c)] / n);
      }
    }

    Matrix<S> d = output_.backward(dlogits);
    Matrix<S> d_memory = Matrix<S>::Zero(memory.rows(), memory.cols());
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) d = it->backward(d, d_memory);
    target_embedding_.backward(drop_.backward(d));
    encoder_.backward(d_memory);
    return loss / n;
  }

  // Autoregressive decoding, one output per source. Sampling draws from
  // rngs[i] for source i.
  std::vector<SampledOutput> generate(const std::vector<std::vector<int>>& src,
                                      const std::vector<std::vector<int>>& labels, int max_len,
                                      DecodeMode mode, std::vector<Rng>& rngs) {
    Rng unused(0);
    Matrix<S> memory = encoder_.forward(src, labels, false, unused);
    const Layout memory_layout = encoder_.layout();
    std::vector<SampledOutput> out(src.size());
    std::vector<std::vector<int>> prefixes(src.size(), std::vector<int>{kBos});
    std::vector<bool> done(src.size(), false);
    for (int step = 0; step < max_len; ++step) {
      Matrix<S> hidden = decode_hidden(prefixes, memory, memory_layout, false, unused);
      const Layout layout = layout_;
      bool any = false;
      for (std::size_t i = 0; i < src.size(); ++i) {
        if (done[i]) continue;
        const int last = layout.start(static_cast<int>(i)) + layout.length(static_cast<int>(i)) - 1;
        Matrix<S> logits = output_.apply(hidden.row(last));
        auto p = softmax(logits.row(0));
        const int id = mode == DecodeMode::greedy ? argmax(p) : sample_categorical(p, rngs[i]);
        out[i].tokens.push_back(id);
        out[i].probs.push_back(p[static_cast<std::size_t>(id)]);
        prefixes[i].push_back(id);
        if (id == kEos) {
          done[i] = true;
        } else {
          any = true;
        }
      }
      if (!any) break;
    }
    for (std::size_t i = 0; i < src.size(); ++i) out[i].truncated = !done[i];
    return out;
  }

  std::vector<std::vector<int>> draw_labels(const std::vector<std::vector<int>>& seqs, LabelMode mode,
                                            Rng& rng) const {
    std::vector<std::vector<int>> labels;
    labels.reserve(seqs.size());
    for (const auto& s : seqs) labels.push_back(encoder_.labels(static_cast<int>(s.size()), mode, rng));
    return labels;
  }

  const ModelConfig& config() const { return cfg_; }
  ParameterStore<S>& parameters() { return store_; }
  Encoder<S>& encoder() { return encoder_; }

 private:
  // Decoder positions use the first rows of the encoder's table.
  Matrix<S> decode_hidden(const std::vector<std::vector<int>>& prefixes, const Matrix<S>& memory,
                          const Layout& memory_layout, bool training, Rng& rng) {
    std::vector<int> flat;
    std::vector<int> positions;
    std::vector<int> lengths;
    for (const auto& p : prefixes) {
      flat.insert(flat.end(), p.begin(), p.end());
      for (std::size_t i = 0; i < p.size(); ++i) positions.push_back(static_cast<int>(i));
      lengths.push_back(static_cast<int>(p.size()));
    }
    layout_ = Layout::from_lengths(lengths);
    Matrix<S> x = drop_.forward(target_embedding_.forward(flat) + encoder_.positions().rows(positions),
                                training, rng);
    for (auto& layer : layers_) x = layer.forward(x, layout_, memory, memory_layout, training, rng);
    return x;
  }

  ModelConfig cfg_;
  ParameterStore<S> store_;
  Encoder<S> encoder_;
  Embedding<S> target_embedding_;
  Linear<S> output_;
  Dropout<S> drop_;
  std::vector<DecoderLayer<S>> layers_;
  Layout layout_;
};

}  // namespace nrs::nn

#endif  // NRS_NN_TRANSFORMER_HPP_
