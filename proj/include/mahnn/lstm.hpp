#pragma once

#include <utility>
#include <vector>

#include "mahnn/rng.hpp"
#include "mahnn/tensor.hpp"

namespace mahnn {

// Gate weights act on the concatenation [h_prev ; x], so each W is
// h x (h + d).
template <class T>
struct LstmParams {
  Tensor<T> w_f, w_i, w_o, w_c;
  Tensor<T> b_f, b_i, b_o, b_c;

  static LstmParams random(std::size_t hidden, std::size_t input, Rng& rng,
                           T range = T(0.08)) {
    LstmParams p;
    auto init = [&](std::size_t r, std::size_t c) {
      auto t = make_tensor<T>(r, c, true);
      for (auto& v : t->value) v = uniform<T>(rng, -range, range);
      return t;
    };
    p.w_f = init(hidden, hidden + input);
    p.w_i = init(hidden, hidden + input);
    p.w_o = init(hidden, hidden + input);
    p.w_c = init(hidden, hidden + input);
    p.b_f = init(hidden, 1);
    p.b_i = init(hidden, 1);
    p.b_o = init(hidden, 1);
    p.b_c = init(hidden, 1);
    return p;
  }

  std::vector<Tensor<T>> weights() const { return {w_f, w_i, w_o, w_c}; }
  std::vector<Tensor<T>> all() const {
    return {w_f, w_i, w_o, w_c, b_f, b_i, b_o, b_c};
  }
};

// One LSTM cell update; h_prev, c_prev are h x 1, x is d x 1.
template <class T>
std::pair<Tensor<T>, Tensor<T>> lstm_step(Tape<T>& tp, const LstmParams<T>& p,
                                          const Tensor<T>& h_prev,
                                          const Tensor<T>& c_prev,
                                          const Tensor<T>& x) {
  auto z = concat_rows(tp, h_prev, x);
  auto f = vsigmoid(tp, add(tp, matmul(tp, p.w_f, z), p.b_f));
  auto i = vsigmoid(tp, add(tp, matmul(tp, p.w_i, z), p.b_i));
  auto o = vsigmoid(tp, add(tp, matmul(tp, p.w_o, z), p.b_o));
  auto c_cand = vtanh(tp, add(tp, matmul(tp, p.w_c, z), p.b_c));
  auto c = add(tp, mul(tp, f, c_prev), mul(tp, i, c_cand));
  auto h = mul(tp, o, vtanh(tp, c));
  return {h, c};
}

template <class T>
struct EncodedSequence {
  Tensor<T> states;            // n x 2h, row i = [fwd_h_i ; bwd_h_i]
  std::vector<bool> pad_mask;  // true at pad positions
};

// Bi-directional encoding from an already-looked-up embedding matrix
// (n x d). Initial hidden and cell states are zero.
template <class T>
EncodedSequence<T> bilstm_encode_embedded(Tape<T>& tp, const Tensor<T>& x_rows,
                                          const std::vector<bool>& pad_mask,
                                          const LstmParams<T>& fwd,
                                          const LstmParams<T>& bwd) {
  const std::size_t n = x_rows->rows;
  const std::size_t hidden = fwd.b_f->rows;
  auto h0f = tp.alloc(hidden, 1, false);
  auto c0f = tp.alloc(hidden, 1, false);
  auto h0b = tp.alloc(hidden, 1, false);
  auto c0b = tp.alloc(hidden, 1, false);

  std::vector<Tensor<T>> fwd_h(n), bwd_h(n);
  {
    Tensor<T> h = h0f, c = c0f;
    for (std::size_t t = 0; t < n; ++t) {
      auto hc = lstm_step(tp, fwd, h, c, get_row(tp, x_rows, t));
      h = hc.first;
      c = hc.second;
      fwd_h[t] = h;
    }
  }
  {
    Tensor<T> h = h0b, c = c0b;
    for (std::size_t t = n; t-- > 0;) {
      auto hc = lstm_step(tp, bwd, h, c, get_row(tp, x_rows, t));
      h = hc.first;
      c = hc.second;
      bwd_h[t] = h;
    }
  }
  std::vector<Tensor<T>> rows(n);
  for (std::size_t t = 0; t < n; ++t)
    rows[t] = concat_rows(tp, fwd_h[t], bwd_h[t]);
  EncodedSequence<T> out;
  out.states = stack_rows(tp, rows);
  out.pad_mask = pad_mask;
  return out;
}

// Full path: embedding lookup (row select) then bidirectional encoding.
template <class T>
EncodedSequence<T> bilstm_encode(Tape<T>& tp, const std::vector<int>& ids,
                                 const std::vector<bool>& pad_mask,
                                 const Tensor<T>& embedding_table,
                                 const LstmParams<T>& fwd,
                                 const LstmParams<T>& bwd) {
  auto x_rows = row_select(tp, embedding_table, ids);
  return bilstm_encode_embedded(tp, x_rows, pad_mask, fwd, bwd);
}

}  // namespace mahnn
