#pragma once

#include <vector>

#include "mahnn/lstm.hpp"
#include "mahnn/rng.hpp"
#include "mahnn/tensor.hpp"

namespace mahnn {

constexpr double kPadPenalty = -99999.0;

enum class MaskMode { train, infer };
enum class SemanticAxis { positions, dimensions };

template <class T>
struct SyntacticChannelParams {
  Tensor<T> w;       // 2h x 2h
  Tensor<T> b;       // 1 x 1
  double keep_prob = 0.9;

  static SyntacticChannelParams random(std::size_t dim2h, double keep_prob,
                                       Rng& rng, T range = T(0.08)) {
    SyntacticChannelParams p;
    p.w = make_tensor<T>(dim2h, dim2h, true);
    for (auto& v : p.w->value) v = uniform<T>(rng, -range, range);
    p.b = make_tensor<T>(1, 1, true);
    p.keep_prob = keep_prob;
    return p;
  }
};

template <class T>
struct SemanticChannelParams {
  Tensor<T> w1;  // da x 2h
  Tensor<T> w2;  // da x 2h
  Tensor<T> b;   // da x 1

  static SemanticChannelParams random(std::size_t attn_dim, std::size_t dim2h,
                                      Rng& rng, T range = T(0.08)) {
    SemanticChannelParams p;
    auto init = [&](std::size_t r, std::size_t c, bool zero = false) {
      auto t = make_tensor<T>(r, c, true);
      if (!zero)
        for (auto& v : t->value) v = uniform<T>(rng, -range, range);
      return t;
    };
    p.w1 = init(attn_dim, dim2h);
    p.w2 = init(attn_dim, dim2h);
    p.b = init(attn_dim, 1, true);
    return p;
  }
};

// Pairwise word-association scores: M[i,j] = tanh(h_i^T (W h_j) + b).
template <class T>
Tensor<T> association_matrix(Tape<T>& tp, const Tensor<T>& states,
                             const SyntacticChannelParams<T>& p) {
  if (states->rows == 0) throw ContractError("association_matrix: empty input");
  auto hw = matmul(tp, states, p.w);                       // n x 2h
  auto bilinear = matmul(tp, hw, transpose(tp, states));   // n x n
  return vtanh(tp, add_scalar(tp, bilinear, p.b));
}

// Channel mask: i.i.d. Bernoulli(keep_prob) per forward pass in training,
// the constant expectation keep_prob at inference.
template <class T>
std::vector<T> sample_channel_mask(std::size_t n, double keep_prob, Rng& rng,
                                   MaskMode mode) {
  if (!(keep_prob > 0.0) || keep_prob > 1.0)
    throw ConfigError("channel mask: keep probability " +
                      std::to_string(keep_prob) + " outside (0, 1]");
  std::vector<T> mask(n * n);
  if (mode == MaskMode::infer || keep_prob == 1.0) {
    std::fill(mask.begin(), mask.end(), static_cast<T>(keep_prob));
  } else {
    std::bernoulli_distribution bern(keep_prob);
    for (auto& v : mask) v = bern(rng) ? T(1) : T(0);
  }
  return mask;
}

// Masked column sums with the pad penalty, then softmax over positions.
template <class T>
Tensor<T> syntactic_weights(Tape<T>& tp, const Tensor<T>& assoc,
                            const std::vector<T>& mask,
                            const std::vector<bool>& pad_mask) {
  if (pad_mask.size() != assoc->rows)
    throw DimensionError("syntactic_weights: pad mask length " +
                         std::to_string(pad_mask.size()) + " vs matrix " +
                         shape_str(assoc));
  auto masked = mul_const(tp, assoc, mask);
  auto scores = col_sum(tp, masked);  // n x 1
  std::vector<T> penalty(pad_mask.size(), T(0));
  for (std::size_t k = 0; k < pad_mask.size(); ++k)
    if (pad_mask[k]) penalty[k] = static_cast<T>(kPadPenalty);
  return softmax_along(tp, add_const(tp, scores, penalty), 0);
}

// Per-dimension importance weights: score_i = W1^T sigma(W2 h_i + b), then a
// softmax across positions for each of the 2h dimensions (the default), or
// across dimensions per position behind the axis switch.
template <class T>
Tensor<T> semantic_weights(Tape<T>& tp, const Tensor<T>& states,
                           const SemanticChannelParams<T>& p,
                           SemanticAxis axis = SemanticAxis::positions) {
  if (states->rows == 0) throw ContractError("semantic_weights: empty input");
  auto hidden = vsigmoid(
      tp, add_rowvec(tp, matmul(tp, states, transpose(tp, p.w2)), p.b));
  auto scores = matmul(tp, hidden, p.w1);  // n x 2h
  return softmax_along(tp, scores, axis == SemanticAxis::positions ? 0 : 1);
}

// Row i of the channel is a_i * (abar_i (.) h_i); abar == nullptr (the rv
// variant) leaves the semantic factor at all-ones.
template <class T>
Tensor<T> build_channel(Tape<T>& tp, const Tensor<T>& states,
                        const Tensor<T>& syn, const Tensor<T>* sem) {
  if (sem) {
    detail::check_same_shape(states, *sem, "build_channel");
    return row_scale(tp, mul(tp, *sem, states), syn);
  }
  return row_scale(tp, states, syn);
}

template <class T>
struct ChannelSet {
  std::vector<Tensor<T>> channels;     // L matrices, n x 2h
  std::vector<Tensor<T>> syn_weights;  // L vectors, n x 1
  std::vector<Tensor<T>> sem_weights;  // L matrices, n x 2h (empty for rv)
};

template <class T>
ChannelSet<T> build_channels(
    Tape<T>& tp, const EncodedSequence<T>& seq,
    const std::vector<SyntacticChannelParams<T>>& syn_params,
    const std::vector<SemanticChannelParams<T>>& sem_params,  // empty -> rv
    MaskMode mode, Rng& rng, SemanticAxis axis = SemanticAxis::positions,
    const std::vector<std::vector<T>>* frozen_masks = nullptr) {
  if (syn_params.empty()) throw ConfigError("build_channels: need L >= 1");
  const bool rv = sem_params.empty();
  if (!rv && sem_params.size() != syn_params.size())
    throw ConfigError("build_channels: parameter list length mismatch");
  const std::size_t n = seq.states->rows;
  ChannelSet<T> out;
  for (std::size_t l = 0; l < syn_params.size(); ++l) {
    auto assoc = association_matrix(tp, seq.states, syn_params[l]);
    std::vector<T> mask =
        frozen_masks ? (*frozen_masks)[l]
                     : sample_channel_mask<T>(n, syn_params[l].keep_prob, rng,
                                              mode);
    auto a = syntactic_weights(tp, assoc, mask, seq.pad_mask);
    out.syn_weights.push_back(a);
    if (rv) {
      out.channels.push_back(build_channel<T>(tp, seq.states, a, nullptr));
    } else {
      auto abar = semantic_weights(tp, seq.states, sem_params[l], axis);
      out.sem_weights.push_back(abar);
      out.channels.push_back(build_channel(tp, seq.states, a, &abar));
    }
  }
  return out;
}

}  // namespace mahnn
