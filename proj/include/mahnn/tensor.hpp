#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mahnn/errors.hpp"

namespace mahnn {

// All tensors are 2-D row-major; column vectors are r x 1, scalars 1 x 1.
template <class T>
struct TensorData {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> value;
  std::vector<T> grad;
  bool requires_grad = false;
  std::string name;

  std::size_t size() const { return rows * cols; }
  T& at(std::size_t i, std::size_t j) { return value[i * cols + j]; }
  T at(std::size_t i, std::size_t j) const { return value[i * cols + j]; }
  void zero_grad() { std::fill(grad.begin(), grad.end(), T(0)); }
};

template <class T>
using Tensor = std::shared_ptr<TensorData<T>>;

template <class T>
inline std::string shape_str(const Tensor<T>& t) {
  return std::to_string(t->rows) + "x" + std::to_string(t->cols);
}

template <class T>
inline Tensor<T> make_tensor(std::size_t rows, std::size_t cols,
                             bool requires_grad = false) {
  auto t = std::make_shared<TensorData<T>>();
  t->rows = rows;
  t->cols = cols;
  t->value.assign(rows * cols, T(0));
  t->grad.assign(rows * cols, T(0));
  t->requires_grad = requires_grad;
  return t;
}

template <class T>
inline Tensor<T> make_tensor(std::size_t rows, std::size_t cols,
                             std::vector<T> values, bool requires_grad = false) {
  auto t = make_tensor<T>(rows, cols, requires_grad);
  if (values.size() != rows * cols)
    throw DimensionError("make_tensor: " + std::to_string(values.size()) +
                         " values for shape " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  t->value = std::move(values);
  return t;
}

// Reverse-mode tape. Operations append nodes in topological order; backward()
// zeroes intermediate gradients, seeds the loss, and walks the nodes in
// reverse, accumulating into leaf gradients.
template <class T>
class Tape {
 public:
  // When false, ops compute values only and record nothing (inference path).
  bool recording = true;

  // Self-test knob: scales the recorded tanh local gradient. Anything other
  // than 1 makes the finite-difference checker report a failure on purpose.
  T tanh_grad_scale = T(1);

  Tensor<T> alloc(std::size_t rows, std::size_t cols, bool requires_grad) {
    return make_tensor<T>(rows, cols, requires_grad && recording);
  }

  void push(Tensor<T> out, std::function<void()> back) {
    if (recording && out->requires_grad)
      nodes_.push_back(Node{std::move(out), std::move(back)});
  }

  void backward(const Tensor<T>& loss) {
    if (loss->size() != 1)
      throw ContractError("backward: loss must be scalar, got shape " +
                          shape_str(loss));
    for (auto& n : nodes_) n.out->zero_grad();
    loss->grad[0] += T(1);
    for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) it->back();
  }

  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor<T> out;
    std::function<void()> back;
  };
  std::vector<Node> nodes_;
};

namespace detail {

template <class T>
inline void check_same_shape(const Tensor<T>& a, const Tensor<T>& b,
                             const char* op) {
  if (a->rows != b->rows || a->cols != b->cols)
    throw DimensionError(std::string(op) + ": shapes " + shape_str(a) +
                         " vs " + shape_str(b));
}

// c += a * b, (m x k)(k x n)
template <class T>
inline void gemm_nn(T* c, const T* a, const T* b, std::size_t m, std::size_t k,
                    std::size_t n) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t p = 0; p < k; ++p) {
      const T av = a[i * k + p];
      if (av == T(0)) continue;
      const T* brow = b + p * n;
      T* crow = c + i * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
}

// c += a * b^T, a: m x k, b: n x k
template <class T>
inline void gemm_nt(T* c, const T* a, const T* b, std::size_t m, std::size_t k,
                    std::size_t n) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const T* arow = a + i * k;
      const T* brow = b + j * k;
      T acc = T(0);
      for (std::size_t p = 0; p < k; ++p) acc += arow[p] * brow[p];
      c[i * n + j] += acc;
    }
}

// c += a^T * b, a: k x m, b: k x n
template <class T>
inline void gemm_tn(T* c, const T* a, const T* b, std::size_t m, std::size_t k,
                    std::size_t n) {
  for (std::size_t p = 0; p < k; ++p) {
    const T* arow = a + p * m;
    const T* brow = b + p * n;
    for (std::size_t i = 0; i < m; ++i) {
      const T av = arow[i];
      if (av == T(0)) continue;
      T* crow = c + i * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

template <class T>
inline T stable_sigmoid(T x) {
  if (x >= T(0)) {
    const T e = std::exp(-x);
    return T(1) / (T(1) + e);
  }
  const T e = std::exp(x);
  return e / (T(1) + e);
}

}  // namespace detail

template <class T>
inline Tensor<T> matmul(Tape<T>& tp, const Tensor<T>& a, const Tensor<T>& b) {
  if (a->cols != b->rows)
    throw DimensionError("matmul: inner dimensions disagree: " + shape_str(a) +
                         " x " + shape_str(b));
  const std::size_t m = a->rows, k = a->cols, n = b->cols;
  auto out = tp.alloc(m, n, a->requires_grad || b->requires_grad);
  detail::gemm_nn(out->value.data(), a->value.data(), b->value.data(), m, k, n);
  tp.push(out, [out, a, b, m, k, n] {
    if (a->requires_grad)
      detail::gemm_nt(a->grad.data(), out->grad.data(), b->value.data(), m, n, k);
    if (b->requires_grad)
      detail::gemm_tn(b->grad.data(), a->value.data(), out->grad.data(), k, m, n);
  });
  return out;
}

template <class T>
inline Tensor<T> transpose(Tape<T>& tp, const Tensor<T>& a) {
  auto out = tp.alloc(a->cols, a->rows, a->requires_grad);
  for (std::size_t i = 0; i < a->rows; ++i)
    for (std::size_t j = 0; j < a->cols; ++j)
      out->value[j * a->rows + i] = a->value[i * a->cols + j];
  tp.push(out, [out, a] {
    for (std::size_t i = 0; i < a->rows; ++i)
      for (std::size_t j = 0; j < a->cols; ++j)
        a->grad[i * a->cols + j] += out->grad[j * a->rows + i];
  });
  return out;
}

template <class T>
inline Tensor<T> add(Tape<T>& tp, const Tensor<T>& a, const Tensor<T>& b) {
  detail::check_same_shape(a, b, "add");
  auto out = tp.alloc(a->rows, a->cols, a->requires_grad || b->requires_grad);
  for (std::size_t i = 0; i < out->size(); ++i)
    out->value[i] = a->value[i] + b->value[i];
  tp.push(out, [out, a, b] {
    for (std::size_t i = 0; i < out->size(); ++i) {
      if (a->requires_grad) a->grad[i] += out->grad[i];
      if (b->requires_grad) b->grad[i] += out->grad[i];
    }
  });
  return out;
}

// m + v broadcast over rows; v has length m->cols (shape cols x 1 or 1 x cols).
template <class T>
inline Tensor<T> add_rowvec(Tape<T>& tp, const Tensor<T>& m, const Tensor<T>& v) {
  if (v->size() != m->cols)
    throw DimensionError("add_rowvec: " + shape_str(m) + " vs " + shape_str(v));
  auto out = tp.alloc(m->rows, m->cols, m->requires_grad || v->requires_grad);
  for (std::size_t i = 0; i < m->rows; ++i)
    for (std::size_t j = 0; j < m->cols; ++j)
      out->value[i * m->cols + j] = m->value[i * m->cols + j] + v->value[j];
  tp.push(out, [out, m, v] {
    for (std::size_t i = 0; i < m->rows; ++i)
      for (std::size_t j = 0; j < m->cols; ++j) {
        const T g = out->grad[i * m->cols + j];
        if (m->requires_grad) m->grad[i * m->cols + j] += g;
        if (v->requires_grad) v->grad[j] += g;
      }
  });
  return out;
}

// m + s with s a 1x1 tensor broadcast everywhere.
template <class T>
inline Tensor<T> add_scalar(Tape<T>& tp, const Tensor<T>& m, const Tensor<T>& s) {
  if (s->size() != 1)
    throw DimensionError("add_scalar: scalar operand has shape " + shape_str(s));
  auto out = tp.alloc(m->rows, m->cols, m->requires_grad || s->requires_grad);
  const T sv = s->value[0];
  for (std::size_t i = 0; i < out->size(); ++i) out->value[i] = m->value[i] + sv;
  tp.push(out, [out, m, s] {
    T acc = T(0);
    for (std::size_t i = 0; i < out->size(); ++i) {
      if (m->requires_grad) m->grad[i] += out->grad[i];
      acc += out->grad[i];
    }
    if (s->requires_grad) s->grad[0] += acc;
  });
  return out;
}

template <class T>
inline Tensor<T> mul(Tape<T>& tp, const Tensor<T>& a, const Tensor<T>& b) {
  detail::check_same_shape(a, b, "mul");
  auto out = tp.alloc(a->rows, a->cols, a->requires_grad || b->requires_grad);
  for (std::size_t i = 0; i < out->size(); ++i)
    out->value[i] = a->value[i] * b->value[i];
  tp.push(out, [out, a, b] {
    for (std::size_t i = 0; i < out->size(); ++i) {
      if (a->requires_grad) a->grad[i] += out->grad[i] * b->value[i];
      if (b->requires_grad) b->grad[i] += out->grad[i] * a->value[i];
    }
  });
  return out;
}

template <class T>
inline Tensor<T> scale(Tape<T>& tp, const Tensor<T>& a, T k) {
  auto out = tp.alloc(a->rows, a->cols, a->requires_grad);
  for (std::size_t i = 0; i < out->size(); ++i) out->value[i] = a->value[i] * k;
  tp.push(out, [out, a, k] {
    for (std::size_t i = 0; i < out->size(); ++i) a->grad[i] += out->grad[i] * k;
  });
  return out;
}

// Elementwise product with a constant (mask); no gradient flows to the mask.
template <class T>
inline Tensor<T> mul_const(Tape<T>& tp, const Tensor<T>& a,
                           std::vector<T> mask) {
  if (mask.size() != a->size())
    throw DimensionError("mul_const: mask length " +
                         std::to_string(mask.size()) + " vs tensor " +
                         shape_str(a));
  auto out = tp.alloc(a->rows, a->cols, a->requires_grad);
  for (std::size_t i = 0; i < out->size(); ++i)
    out->value[i] = a->value[i] * mask[i];
  auto m = std::make_shared<std::vector<T>>(std::move(mask));
  tp.push(out, [out, a, m] {
    for (std::size_t i = 0; i < out->size(); ++i)
      a->grad[i] += out->grad[i] * (*m)[i];
  });
  return out;
}

// a + constant vector (same total size); gradient passes through unchanged.
template <class T>
inline Tensor<T> add_const(Tape<T>& tp, const Tensor<T>& a,
                           const std::vector<T>& c) {
  if (c.size() != a->size())
    throw DimensionError("add_const: constant length " +
                         std::to_string(c.size()) + " vs tensor " +
                         shape_str(a));
  auto out = tp.alloc(a->rows, a->cols, a->requires_grad);
  for (std::size_t i = 0; i < out->size(); ++i)
    out->value[i] = a->value[i] + c[i];
  tp.push(out, [out, a] {
    for (std::size_t i = 0; i < out->size(); ++i) a->grad[i] += out->grad[i];
  });
  return out;
}

template <class T>
inline Tensor<T> vtanh(Tape<T>& tp, const Tensor<T>& a) {
  auto out = tp.alloc(a->rows, a->cols, a->requires_grad);
  for (std::size_t i = 0; i < out->size(); ++i)
    out->value[i] = std::tanh(a->value[i]);
  const T gscale = tp.tanh_grad_scale;
  tp.push(out, [out, a, gscale] {
    for (std::size_t i = 0; i < out->size(); ++i) {
      const T t = out->value[i];
      a->grad[i] += gscale * out->grad[i] * (T(1) - t * t);
    }
  });
  return out;
}

template <class T>
inline Tensor<T> vsigmoid(Tape<T>& tp, const Tensor<T>& a) {
  auto out = tp.alloc(a->rows, a->cols, a->requires_grad);
  for (std::size_t i = 0; i < out->size(); ++i)
    out->value[i] = detail::stable_sigmoid(a->value[i]);
  tp.push(out, [out, a] {
    for (std::size_t i = 0; i < out->size(); ++i) {
      const T s = out->value[i];
      a->grad[i] += out->grad[i] * s * (T(1) - s);
    }
  });
  return out;
}

// relu'(0) := 0.
template <class T>
inline Tensor<T> vrelu(Tape<T>& tp, const Tensor<T>& a) {
  auto out = tp.alloc(a->rows, a->cols, a->requires_grad);
  for (std::size_t i = 0; i < out->size(); ++i)
    out->value[i] = a->value[i] > T(0) ? a->value[i] : T(0);
  tp.push(out, [out, a] {
    for (std::size_t i = 0; i < out->size(); ++i)
      if (a->value[i] > T(0)) a->grad[i] += out->grad[i];
  });
  return out;
}

// axis 0: normalize over the row index (each column sums to 1).
// axis 1: normalize over the column index (each row sums to 1).
// Max-subtraction keeps the -99999 pad penalty finite even on all-pad rows.
template <class T>
inline Tensor<T> softmax_along(Tape<T>& tp, const Tensor<T>& x, int axis) {
  if (axis != 0 && axis != 1)
    throw ContractError("softmax_along: axis must be 0 or 1");
  for (const T v : x->value)
    if (std::isnan(v)) throw NumericError("softmax_along: NaN input");
  auto out = tp.alloc(x->rows, x->cols, x->requires_grad);
  const std::size_t groups = axis == 0 ? x->cols : x->rows;
  const std::size_t len = axis == 0 ? x->rows : x->cols;
  const std::size_t gstride = axis == 0 ? 1 : x->cols;
  const std::size_t estride = axis == 0 ? x->cols : 1;
  for (std::size_t g = 0; g < groups; ++g) {
    const T* xin = x->value.data() + g * gstride;
    T* yout = out->value.data() + g * gstride;
    T mx = xin[0];
    for (std::size_t i = 1; i < len; ++i) mx = std::max(mx, xin[i * estride]);
    T sum = T(0);
    for (std::size_t i = 0; i < len; ++i) {
      const T e = std::exp(xin[i * estride] - mx);
      yout[i * estride] = e;
      sum += e;
    }
    for (std::size_t i = 0; i < len; ++i) yout[i * estride] /= sum;
  }
  tp.push(out, [out, x, groups, len, gstride, estride] {
    for (std::size_t g = 0; g < groups; ++g) {
      const T* y = out->value.data() + g * gstride;
      const T* gy = out->grad.data() + g * gstride;
      T* gx = x->grad.data() + g * gstride;
      T dot = T(0);
      for (std::size_t i = 0; i < len; ++i)
        dot += gy[i * estride] * y[i * estride];
      for (std::size_t i = 0; i < len; ++i)
        gx[i * estride] += y[i * estride] * (gy[i * estride] - dot);
    }
  });
  return out;
}

// Column sums: (r x c) -> (c x 1).
template <class T>
inline Tensor<T> col_sum(Tape<T>& tp, const Tensor<T>& m) {
  auto out = tp.alloc(m->cols, 1, m->requires_grad);
  for (std::size_t i = 0; i < m->rows; ++i)
    for (std::size_t j = 0; j < m->cols; ++j)
      out->value[j] += m->value[i * m->cols + j];
  tp.push(out, [out, m] {
    for (std::size_t i = 0; i < m->rows; ++i)
      for (std::size_t j = 0; j < m->cols; ++j)
        m->grad[i * m->cols + j] += out->grad[j];
  });
  return out;
}

template <class T>
inline Tensor<T> sum(Tape<T>& tp, const Tensor<T>& a) {
  auto out = tp.alloc(1, 1, a->requires_grad);
  T acc = T(0);
  for (const T v : a->value) acc += v;
  out->value[0] = acc;
  tp.push(out, [out, a] {
    for (std::size_t i = 0; i < a->size(); ++i) a->grad[i] += out->grad[0];
  });
  return out;
}

template <class T>
inline Tensor<T> sum_squares(Tape<T>& tp, const Tensor<T>& a) {
  auto out = tp.alloc(1, 1, a->requires_grad);
  T acc = T(0);
  for (const T v : a->value) acc += v * v;
  out->value[0] = acc;
  tp.push(out, [out, a] {
    for (std::size_t i = 0; i < a->size(); ++i)
      a->grad[i] += T(2) * a->value[i] * out->grad[0];
  });
  return out;
}

// Vertical concatenation; operands must share a column count.
template <class T>
inline Tensor<T> concat_rows(Tape<T>& tp, const Tensor<T>& a, const Tensor<T>& b) {
  if (a->cols != b->cols)
    throw DimensionError("concat_rows: " + shape_str(a) + " vs " + shape_str(b));
  auto out = tp.alloc(a->rows + b->rows, a->cols,
                      a->requires_grad || b->requires_grad);
  std::copy(a->value.begin(), a->value.end(), out->value.begin());
  std::copy(b->value.begin(), b->value.end(), out->value.begin() + a->size());
  tp.push(out, [out, a, b] {
    if (a->requires_grad)
      for (std::size_t i = 0; i < a->size(); ++i) a->grad[i] += out->grad[i];
    if (b->requires_grad)
      for (std::size_t i = 0; i < b->size(); ++i)
        b->grad[i] += out->grad[a->size() + i];
  });
  return out;
}

// Stack column vectors (k x 1 each) as the rows of an (n x k) matrix.
template <class T>
inline Tensor<T> stack_rows(Tape<T>& tp, const std::vector<Tensor<T>>& rows) {
  if (rows.empty()) throw ContractError("stack_rows: no rows");
  const std::size_t k = rows.front()->size();
  bool req = false;
  for (const auto& r : rows) {
    if (r->size() != k)
      throw DimensionError("stack_rows: inconsistent row length");
    req = req || r->requires_grad;
  }
  auto out = tp.alloc(rows.size(), k, req);
  for (std::size_t i = 0; i < rows.size(); ++i)
    std::copy(rows[i]->value.begin(), rows[i]->value.end(),
              out->value.begin() + i * k);
  tp.push(out, [out, rows, k] {
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (rows[i]->requires_grad)
        for (std::size_t j = 0; j < k; ++j)
          rows[i]->grad[j] += out->grad[i * k + j];
  });
  return out;
}

// Gather rows of `table` by index; gradients scatter-add back.
template <class T>
inline Tensor<T> row_select(Tape<T>& tp, const Tensor<T>& table,
                            const std::vector<int>& ids) {
  for (const int id : ids)
    if (id < 0 || static_cast<std::size_t>(id) >= table->rows)
      throw std::out_of_range("row_select: id " + std::to_string(id) +
                              " outside [0, " + std::to_string(table->rows) +
                              ")");
  auto out = tp.alloc(ids.size(), table->cols, table->requires_grad);
  for (std::size_t i = 0; i < ids.size(); ++i)
    std::copy(table->value.begin() + ids[i] * table->cols,
              table->value.begin() + (ids[i] + 1) * table->cols,
              out->value.begin() + i * table->cols);
  tp.push(out, [out, table, ids] {
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = 0; j < table->cols; ++j)
        table->grad[ids[i] * table->cols + j] +=
            out->grad[i * table->cols + j];
  });
  return out;
}

// Row i of a matrix as a column vector.
template <class T>
inline Tensor<T> get_row(Tape<T>& tp, const Tensor<T>& m, std::size_t i) {
  if (i >= m->rows) throw std::out_of_range("get_row: row index out of range");
  auto out = tp.alloc(m->cols, 1, m->requires_grad);
  std::copy(m->value.begin() + i * m->cols, m->value.begin() + (i + 1) * m->cols,
            out->value.begin());
  tp.push(out, [out, m, i] {
    for (std::size_t j = 0; j < m->cols; ++j)
      m->grad[i * m->cols + j] += out->grad[j];
  });
  return out;
}

// Scale row i of m by v[i]; v is n x 1.
template <class T>
inline Tensor<T> row_scale(Tape<T>& tp, const Tensor<T>& m, const Tensor<T>& v) {
  if (v->size() != m->rows)
    throw DimensionError("row_scale: " + shape_str(m) + " vs " + shape_str(v));
  auto out = tp.alloc(m->rows, m->cols, m->requires_grad || v->requires_grad);
  for (std::size_t i = 0; i < m->rows; ++i)
    for (std::size_t j = 0; j < m->cols; ++j)
      out->value[i * m->cols + j] = m->value[i * m->cols + j] * v->value[i];
  tp.push(out, [out, m, v] {
    for (std::size_t i = 0; i < m->rows; ++i) {
      T acc = T(0);
      for (std::size_t j = 0; j < m->cols; ++j) {
        const T g = out->grad[i * m->cols + j];
        if (m->requires_grad) m->grad[i * m->cols + j] += g * v->value[i];
        acc += g * m->value[i * m->cols + j];
      }
      if (v->requires_grad) v->grad[i] += acc;
    }
  });
  return out;
}

// Negative log likelihood of one class from a probability vector, with the
// log argument clamped at 1e-12.
template <class T>
inline Tensor<T> nll_pick(Tape<T>& tp, const Tensor<T>& probs, int label) {
  if (label < 0 || static_cast<std::size_t>(label) >= probs->size())
    throw ContractError("nll_pick: label " + std::to_string(label) +
                        " outside [0, " + std::to_string(probs->size()) + ")");
  constexpr T kClamp = T(1e-12);
  auto out = tp.alloc(1, 1, probs->requires_grad);
  const T p = std::max(probs->value[label], kClamp);
  out->value[0] = -std::log(p);
  tp.push(out, [out, probs, label] {
    const T pv = probs->value[label];
    if (pv > kClamp) probs->grad[label] += -out->grad[0] / pv;
  });
  return out;
}

}  // namespace mahnn
