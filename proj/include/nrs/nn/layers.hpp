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

#ifndef NRS_NN_LAYERS_HPP_
#define NRS_NN_LAYERS_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "nrs/nn/tensor.hpp"

namespace nrs::nn {

// Additive fill for masked attention logits.
inline constexpr double kMaskFill = -1e9;

enum class MaskKind { none, causal, diagonal };

struct AttentionMaskConfig {
  MaskKind kind = MaskKind::none;
  // Half-width of the diagonal window; the window spans 2k + 1 positions.
  int k = 1;
};

// Additive mask: 0 where |i - j| <= k, kMaskFill elsewhere.
template <typename S>
Matrix<S> diagonal_attention_mask(int length, int k) {
  Matrix<S> mask(length, length);
  for (int i = 0; i < length; ++i) {
    for (int j = 0; j < length; ++j) {
      mask(i, j) = std::abs(i - j) <= k ? S(0) : static_cast<S>(kMaskFill);
    }
  }
  return mask;
}

// Row-wise softmax in place.
template <typename S>
void softmax_rows(Matrix<S>& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    const S top = row.maxCoeff();
    row = (row.array() - top).exp();
    row /= row.sum();
  }
}

template <typename S>
class Linear {
 public:
  Linear() = default;

  // Default init is U(-1/sqrt(in), 1/sqrt(in)) for weights and bias. With
  // xavier set, weights are U(-gain*sqrt(6/(in+out)), ...) and bias is zero.
  Linear(ParameterStore<S>& store, const std::string& name, int in, int out, Rng& rng,
         bool xavier = false, double gain = 1.0) {
    weight_ = store.add(name + ".weight", in, out);
    bias_ = store.add(name + ".bias", 1, out);
    if (xavier) {
      init_uniform(weight_->value, gain * std::sqrt(6.0 / (in + out)), rng);
    } else {
      const double bound = 1.0 / std::sqrt(static_cast<double>(in));
      init_uniform(weight_->value, bound, rng);
      init_uniform(bias_->value, bound, rng);
    }
  }

  Matrix<S> forward(const Matrix<S>& x) {
    input_ = x;
    return apply(x);
  }

  Matrix<S> apply(const Matrix<S>& x) const {
    Matrix<S> y = x * weight_->value;
    y.rowwise() += bias_->value.row(0);
    return y;
  }

  Matrix<S> backward(const Matrix<S>& dy) {
    weight_->grad.noalias() += input_.transpose() * dy;
    bias_->grad.row(0) += dy.colwise().sum();
    return dy * weight_->value.transpose();
  }

  Parameter<S>* weight() const { return weight_; }
  Parameter<S>* bias() const { return bias_; }

 private:
  Parameter<S>* weight_ = nullptr;
  Parameter<S>* bias_ = nullptr;
  Matrix<S> input_;
};

template <typename S>
class LayerNorm {
 public:
  LayerNorm() = default;
  LayerNorm(ParameterStore<S>& store, const std::string& name, int dim) {
    gamma_ = store.add(name + ".gamma", 1, dim);
    beta_ = store.add(name + ".beta", 1, dim);
    gamma_->value.setOnes();
  }

  Matrix<S> forward(const Matrix<S>& x) {
    const auto n = x.rows();
    const auto d = x.cols();
    normalized_.resize(n, d);
    inv_std_.resize(n);
    for (Eigen::Index r = 0; r < n; ++r) {
      const S mean = x.row(r).mean();
      const S var = (x.row(r).array() - mean).square().mean();
      const S inv = S(1) / std::sqrt(var + static_cast<S>(1e-5));
      inv_std_[r] = inv;
      normalized_.row(r) = (x.row(r).array() - mean) * inv;
    }
    Matrix<S> y = normalized_.array().rowwise() * gamma_->value.row(0).array();
    y.rowwise() += beta_->value.row(0);
    return y;
  }

  Matrix<S> backward(const Matrix<S>& dy) {
    gamma_->grad.row(0) += (dy.array() * normalized_.array()).colwise().sum().matrix();
    beta_->grad.row(0) += dy.colwise().sum();
    const auto d = static_cast<S>(dy.cols());
    Matrix<S> dxhat = dy.array().rowwise() * gamma_->value.row(0).array();
    Matrix<S> dx(dy.rows(), dy.cols());
    for (Eigen::Index r = 0; r < dy.rows(); ++r) {
      const S sum = dxhat.row(r).sum();
      const S dot = dxhat.row(r).dot(normalized_.row(r));
      dx.row(r) = (inv_std_[r] / d) *
                  (d * dxhat.row(r).array() - sum - normalized_.row(r).array() * dot).matrix();
    }
    return dx;
  }

 private:
  Parameter<S>* gamma_ = nullptr;
  Parameter<S>* beta_ = nullptr;
  Matrix<S> normalized_;
  Eigen::Matrix<S, Eigen::Dynamic, 1> inv_std_;
};

template <typename S>
class Dropout {
 public:
  explicit Dropout(double p = 0.0) : p_(p) {}

  Matrix<S> forward(const Matrix<S>& x, bool training, Rng& rng) {
    active_ = training && p_ > 0.0;
    if (!active_) return x;
    mask_.resize(x.rows(), x.cols());
    const S keep = static_cast<S>(1.0 / (1.0 - p_));
    // Four 16-bit decisions per 64-bit splitmix draw; p is quantised to 2^-16.
    const auto cut = static_cast<std::uint64_t>(p_ * 65536.0);
    std::uint64_t state = rng.next();
    std::uint64_t bits = 0;
    for (Eigen::Index i = 0; i < mask_.size(); ++i) {
      if (i % 4 == 0) {
        state += 0x9E3779B97F4A7C15ULL;
        bits = state;
        bits = (bits ^ (bits >> 30)) * 0xBF58476D1CE4E5B9ULL;
        bits = (bits ^ (bits >> 27)) * 0x94D049BB133111EBULL;
        bits ^= bits >> 31;
      }
      mask_.data()[i] = (bits & 0xFFFF) < cut ? S(0) : keep;
      bits >>= 16;
    }
    return x.cwiseProduct(mask_);
  }

  Matrix<S> backward(const Matrix<S>& dy) const { return active_ ? Matrix<S>(dy.cwiseProduct(mask_)) : dy; }

 private:
  double p_;
  bool active_ = false;
  Matrix<S> mask_;
};

template <typename S>
class Embedding {
 public:
  Embedding() = default;
  Embedding(ParameterStore<S>& store, const std::string& name, int vocab, int dim, Rng& rng) {
    table_ = store.add(name + ".table", vocab, dim);
    init_normal(table_->value, 1.0, rng);
  }

  Matrix<S> forward(const std::vector<int>& ids) {
    ids_ = ids;
    Matrix<S> out(static_cast<Eigen::Index>(ids.size()), table_->value.cols());
    for (std::size_t i = 0; i < ids.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = table_->value.row(ids[i]);
    return out;
  }

  void backward(const Matrix<S>& dy) {
    for (std::size_t i = 0; i < ids_.size(); ++i) table_->grad.row(ids_[i]) += dy.row(static_cast<Eigen::Index>(i));
  }

  Parameter<S>* table() const { return table_; }

 private:
  Parameter<S>* table_ = nullptr;
  std::vector<int> ids_;
};

template <typename S>
class FeedForward {
 public:
  FeedForward() = default;
  FeedForward(ParameterStore<S>& store, const std::string& name, int dim, int hidden, double dropout,
              Rng& rng)
      : in_(store, name + ".in", dim, hidden, rng), out_(store, name + ".out", hidden, dim, rng),
        dropout_(dropout) {}

  Matrix<S> forward(const Matrix<S>& x, bool training, Rng& rng) {
    Matrix<S> h = in_.forward(x);
    active_ = (h.array() > S(0)).template cast<S>();
    h = h.cwiseProduct(active_);
    return out_.forward(dropout_.forward(h, training, rng));
  }

  Matrix<S> backward(const Matrix<S>& dy) {
    Matrix<S> dh = dropout_.backward(out_.backward(dy));
    return in_.backward(dh.cwiseProduct(active_));
  }

 private:
  Linear<S> in_;
  Linear<S> out_;
  Dropout<S> dropout_;
  Matrix<S> active_;
};

// Multi-head scaled dot-product attention over packed sequences. Query and
// key/value sequences are paired by index in their layouts.
template <typename S>
class MultiHeadAttention {
 public:
  MultiHeadAttention() = default;
  MultiHeadAttention(ParameterStore<S>& store, const std::string& name, int dim, int heads, Rng& rng,
                     double gain = 1.0)
      : heads_(heads), head_dim_(dim / heads),
        q_(store, name + ".q", dim, dim, rng, true, gain),
        k_(store, name + ".k", dim, dim, rng, true, gain),
        v_(store, name + ".v", dim, dim, rng, true, gain),
        o_(store, name + ".o", dim, dim, rng) {}

  Matrix<S> forward(const Matrix<S>& xq, const Layout& lq, const Matrix<S>& xkv, const Layout& lkv,
                    AttentionMaskConfig mask) {
    lq_ = lq;
    lkv_ = lkv;
    query_ = q_.forward(xq);
    key_ = k_.forward(xkv);
    value_ = v_.forward(xkv);
    const S scale = S(1) / std::sqrt(static_cast<S>(head_dim_));
    Matrix<S> context(xq.rows(), xq.cols());
    weights_.assign(static_cast<std::size_t>(lq.batch() * heads_), Matrix<S>());
    for (int s = 0; s < lq.batch(); ++s) {
      const int nq = lq.length(s);
      const int nk = lkv.length(s);
      for (int h = 0; h < heads_; ++h) {
        auto qs = query_.block(lq.start(s), h * head_dim_, nq, head_dim_);
        auto ks = key_.block(lkv.start(s), h * head_dim_, nk, head_dim_);
        auto vs = value_.block(lkv.start(s), h * head_dim_, nk, head_dim_);
        Matrix<S>& p = weights_[static_cast<std::size_t>(s * heads_ + h)];
        p.noalias() = (qs * ks.transpose()) * scale;
        apply_mask(p, mask);
        softmax_rows(p);
        context.block(lq.start(s), h * head_dim_, nq, head_dim_).noalias() = p * vs;
      }
    }
    return o_.forward(context);
  }

  // Returns (d query input, d key/value input).
  std::pair<Matrix<S>, Matrix<S>> backward(const Matrix<S>& dy) {
    Matrix<S> dcontext = o_.backward(dy);
    Matrix<S> dq = Matrix<S>::Zero(query_.rows(), query_.cols());
    Matrix<S> dk = Matrix<S>::Zero(key_.rows(), key_.cols());
    Matrix<S> dv = Matrix<S>::Zero(value_.rows(), value_.cols());
    const S scale = S(1) / std::sqrt(static_cast<S>(head_dim_));
    for (int s = 0; s < lq_.batch(); ++s) {
      const int nq = lq_.length(s);
      const int nk = lkv_.length(s);
      for (int h = 0; h < heads_; ++h) {
        const Matrix<S>& p = weights_[static_cast<std::size_t>(s * heads_ + h)];
        auto dctx = dcontext.block(lq_.start(s), h * head_dim_, nq, head_dim_);
        auto qs = query_.block(lq_.start(s), h * head_dim_, nq, head_dim_);
        auto ks = key_.block(lkv_.start(s), h * head_dim_, nk, head_dim_);
        auto vs = value_.block(lkv_.start(s), h * head_dim_, nk, head_dim_);
        Matrix<S> dp = dctx * vs.transpose();
        dv.block(lkv_.start(s), h * head_dim_, nk, head_dim_).noalias() += p.transpose() * dctx;
        Matrix<S> dscores(nq, nk);
        for (int r = 0; r < nq; ++r) {
          const S dot = dp.row(r).dot(p.row(r));
          dscores.row(r) = p.row(r).cwiseProduct((dp.row(r).array() - dot).matrix());
        }
        dscores *= scale;
        dq.block(lq_.start(s), h * head_dim_, nq, head_dim_).noalias() += dscores * ks;
        dk.block(lkv_.start(s), h * head_dim_, nk, head_dim_).noalias() += dscores.transpose() * qs;
      }
    }
    Matrix<S> dxq = q_.backward(dq);
    Matrix<S> dxkv = k_.backward(dk);
    dxkv += v_.backward(dv);
    return {std::move(dxq), std::move(dxkv)};
  }

  // Post-softmax weights of the last forward, for sequence s and head h.
  const Matrix<S>& attention_weights(int s, int h) const {
    return weights_[static_cast<std::size_t>(s * heads_ + h)];
  }

  static void apply_mask(Matrix<S>& scores, AttentionMaskConfig mask) {
    switch (mask.kind) {
      case MaskKind::none:
        return;
      case MaskKind::causal:
        for (Eigen::Index i = 0; i < scores.rows(); ++i) {
          for (Eigen::Index j = i + 1; j < scores.cols(); ++j) scores(i, j) += static_cast<S>(kMaskFill);
        }
        return;
      case MaskKind::diagonal:
        scores += diagonal_attention_mask<S>(static_cast<int>(scores.rows()), mask.k);
        return;
    }
  }

 private:
  int heads_ = 1;
  int head_dim_ = 1;
  Linear<S> q_, k_, v_, o_;
  Layout lq_, lkv_;
  Matrix<S> query_, key_, value_;
  std::vector<Matrix<S>> weights_;
};

}  // namespace nrs::nn

#endif  // NRS_NN_LAYERS_HPP_
