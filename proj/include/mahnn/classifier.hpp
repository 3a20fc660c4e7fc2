#pragma once

#include <vector>

#include "mahnn/attention.hpp"
#include "mahnn/rng.hpp"
#include "mahnn/tensor.hpp"

namespace mahnn {

// One weight matrix per filter width: maps x (L * width * 2h). Row f is the
// filter, laid out channel-major then window-row then hidden-dim.
template <class T>
struct ConvFilterBank {
  struct WidthGroup {
    int width = 0;
    Tensor<T> weight;  // maps x (L * width * dim2h)
    Tensor<T> bias;    // maps x 1
  };
  std::vector<WidthGroup> groups;
  std::size_t channels = 0;
  std::size_t dim2h = 0;

  static ConvFilterBank random(const std::vector<int>& widths,
                               std::size_t maps, std::size_t channels,
                               std::size_t dim2h, std::size_t max_len,
                               Rng& rng, T range = T(0.08)) {
    ConvFilterBank bank;
    bank.channels = channels;
    bank.dim2h = dim2h;
    for (const int w : widths) {
      if (w < 1 || static_cast<std::size_t>(w) > max_len)
        throw ConfigError("filter width " + std::to_string(w) +
                          " invalid for padded length " +
                          std::to_string(max_len));
      WidthGroup g;
      g.width = w;
      g.weight = make_tensor<T>(maps, channels * w * dim2h, true);
      for (auto& v : g.weight->value) v = uniform<T>(rng, -range, range);
      // a small positive bias keeps the relu units initially active,
      // which matters when the attention-weighted inputs are tiny
      g.bias = make_tensor<T>(maps, 1, std::vector<T>(maps, T(0.1)), true);
      bank.groups.push_back(std::move(g));
    }
    return bank;
  }

  std::size_t total_filters() const {
    std::size_t s = 0;
    for (const auto& g : groups) s += g.weight->rows;
    return s;
  }
};

// relu(sum over channel slabs of m . window + b) per position, then
// max-over-time per filter; ties go to the lowest window index. Output is the
// concatenated feature vector r (S x 1) in declared filter order.
template <class T>
Tensor<T> conv_maxpool(Tape<T>& tp, const std::vector<Tensor<T>>& channels,
                       const ConvFilterBank<T>& bank) {
  if (channels.size() != bank.channels)
    throw DimensionError("conv_maxpool: " + std::to_string(channels.size()) +
                         " channels, bank built for " +
                         std::to_string(bank.channels));
  const std::size_t n = channels.front()->rows;
  const std::size_t dim = bank.dim2h;
  for (const auto& c : channels)
    if (c->rows != n || c->cols != dim)
      throw DimensionError("conv_maxpool: channel shape " + shape_str(c));

  bool req = false;
  for (const auto& c : channels) req = req || c->requires_grad;
  for (const auto& g : bank.groups)
    req = req || g.weight->requires_grad || g.bias->requires_grad;

  auto out = tp.alloc(bank.total_filters(), 1, req);
  // argmax window and pre-activation per filter, captured for backward
  auto best = std::make_shared<std::vector<std::pair<std::size_t, T>>>();

  std::size_t fi = 0;
  for (const auto& g : bank.groups) {
    const std::size_t w = static_cast<std::size_t>(g.width);
    if (w > n)
      throw ConfigError("conv_maxpool: filter width " + std::to_string(w) +
                        " exceeds sequence length " + std::to_string(n));
    const std::size_t windows = n - w + 1;
    const std::size_t wcols = g.weight->cols;
    for (std::size_t f = 0; f < g.weight->rows; ++f, ++fi) {
      const T* wt = g.weight->value.data() + f * wcols;
      T best_pre = T(0);
      std::size_t best_i = 0;
      for (std::size_t i = 0; i < windows; ++i) {
        T acc = g.bias->value[f];
        std::size_t off = 0;
        for (std::size_t ch = 0; ch < channels.size(); ++ch) {
          const T* cv = channels[ch]->value.data() + i * dim;
          for (std::size_t e = 0; e < w * dim; ++e) acc += wt[off + e] * cv[e];
          off += w * dim;
        }
        if (i == 0 || acc > best_pre) {
          best_pre = acc;
          best_i = i;
        }
      }
      best->push_back({best_i, best_pre});
      out->value[fi] = best_pre > T(0) ? best_pre : T(0);
    }
  }

  tp.push(out, [out, channels, bank, best, dim] {
    std::size_t fi = 0;
    for (const auto& g : bank.groups) {
      const std::size_t w = static_cast<std::size_t>(g.width);
      const std::size_t wcols = g.weight->cols;
      for (std::size_t f = 0; f < g.weight->rows; ++f, ++fi) {
        const auto [win, pre] = (*best)[fi];
        const T gy = out->grad[fi];
        if (gy == T(0) || pre <= T(0)) continue;  // relu'(0) := 0
        if (g.bias->requires_grad) g.bias->grad[f] += gy;
        const T* wt = g.weight->value.data() + f * wcols;
        T* wg = g.weight->grad.data() + f * wcols;
        std::size_t off = 0;
        for (std::size_t ch = 0; ch < channels.size(); ++ch) {
          const T* cv = channels[ch]->value.data() + win * dim;
          T* cg = channels[ch]->grad.data() + win * dim;
          for (std::size_t e = 0; e < w * dim; ++e) {
            if (g.weight->requires_grad) wg[off + e] += gy * cv[e];
            if (channels[ch]->requires_grad) cg[e] += gy * wt[off + e];
          }
          off += w * dim;
        }
      }
    }
  });
  return out;
}

template <class T>
struct SoftmaxHead {
  Tensor<T> w;  // c x S
  Tensor<T> b;  // c x 1

  static SoftmaxHead random(std::size_t num_classes, std::size_t features,
                            Rng& rng, T range = T(0.08)) {
    if (num_classes < 2) throw ConfigError("softmax head: need >= 2 classes");
    SoftmaxHead h;
    h.w = make_tensor<T>(num_classes, features, true);
    for (auto& v : h.w->value) v = uniform<T>(rng, -range, range);
    h.b = make_tensor<T>(num_classes, 1, true);
    return h;
  }
};

template <class T>
Tensor<T> classify(Tape<T>& tp, const Tensor<T>& features,
                   const SoftmaxHead<T>& head) {
  return softmax_along(tp, add(tp, matmul(tp, head.w, features), head.b), 0);
}

// Cross-entropy plus L2 over the regularized weight matrices.
template <class T>
Tensor<T> classification_loss(Tape<T>& tp, const Tensor<T>& probs, int label,
                              const std::vector<Tensor<T>>& regularized,
                              T lambda) {
  if (lambda < T(0)) throw ConfigError("loss: lambda must be >= 0");
  auto loss = nll_pick(tp, probs, label);
  if (lambda > T(0))
    for (const auto& w : regularized)
      loss = add(tp, loss, scale(tp, sum_squares(tp, w), lambda));
  return loss;
}

}  // namespace mahnn
