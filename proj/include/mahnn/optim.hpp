#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "mahnn/errors.hpp"
#include "mahnn/tensor.hpp"

namespace mahnn {

template <class T>
inline void check_finite_grads(
    const std::vector<std::pair<std::string, Tensor<T>>>& params) {
  for (const auto& [name, p] : params) {
    if (!p->requires_grad) continue;
    for (const T g : p->grad)
      if (!std::isfinite(g))
        throw NumericError("non-finite gradient in parameter \"" + name + "\"");
  }
}

template <class T>
class SgdOptimizer {
 public:
  explicit SgdOptimizer(T lr) : lr_(lr) {}

  void step(const std::vector<std::pair<std::string, Tensor<T>>>& params) {
    check_finite_grads(params);
    for (const auto& [name, p] : params) {
      if (!p->requires_grad) continue;
      for (std::size_t i = 0; i < p->size(); ++i)
        p->value[i] -= lr_ * p->grad[i];
    }
  }

 private:
  T lr_;
};

// Standard Adam with bias correction.
template <class T>
class AdamOptimizer {
 public:
  explicit AdamOptimizer(T lr, T beta1 = T(0.9), T beta2 = T(0.999),
                         T eps = T(1e-8))
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void step(const std::vector<std::pair<std::string, Tensor<T>>>& params) {
    check_finite_grads(params);
    if (m_.empty()) {
      for (const auto& [name, p] : params) {
        m_.emplace_back(p->size(), T(0));
        v_.emplace_back(p->size(), T(0));
      }
    }
    ++t_;
    const T bc1 = T(1) - std::pow(beta1_, static_cast<T>(t_));
    const T bc2 = T(1) - std::pow(beta2_, static_cast<T>(t_));
    for (std::size_t pi = 0; pi < params.size(); ++pi) {
      const auto& p = params[pi].second;
      if (!p->requires_grad) continue;
      auto& m = m_[pi];
      auto& v = v_[pi];
      for (std::size_t i = 0; i < p->size(); ++i) {
        const T g = p->grad[i];
        m[i] = beta1_ * m[i] + (T(1) - beta1_) * g;
        v[i] = beta2_ * v[i] + (T(1) - beta2_) * g * g;
        const T mhat = m[i] / bc1;
        const T vhat = v[i] / bc2;
        p->value[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
      }
    }
  }

 private:
  T lr_, beta1_, beta2_, eps_;
  long t_ = 0;
  std::vector<std::vector<T>> m_, v_;
};

}  // namespace mahnn
