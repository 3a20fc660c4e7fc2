#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "mahnn/tensor.hpp"

namespace mahnn {

// Central-difference verification of reverse-mode gradients.
//
// `loss` must be a pure function of the current parameter values. Called with
// with_grad=true it must also run backward, accumulating into the parameters'
// grad slots (which this routine zeroes first). Parameters with
// requires_grad=false are skipped. Returns max over all checked entries of
// |analytic - numeric| / max(|analytic|, |numeric|, 1e-8).
template <class T>
T finite_diff_check(const std::function<T(bool with_grad)>& loss,
                    const std::vector<Tensor<T>>& params, T eps = T(1e-5)) {
  if (!(eps > T(0))) throw ContractError("finite_diff_check: eps must be > 0");
  for (const auto& p : params) p->zero_grad();
  const T base = loss(true);
  if (!std::isfinite(base))
    throw NumericError("finite_diff_check: non-finite loss");
  std::vector<std::vector<T>> analytic;
  analytic.reserve(params.size());
  for (const auto& p : params) analytic.push_back(p->grad);

  T worst = T(0);
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    const auto& p = params[pi];
    if (!p->requires_grad) continue;
    for (std::size_t i = 0; i < p->size(); ++i) {
      const T saved = p->value[i];
      p->value[i] = saved + eps;
      const T up = loss(false);
      p->value[i] = saved - eps;
      const T down = loss(false);
      p->value[i] = saved;
      if (!std::isfinite(up) || !std::isfinite(down))
        throw NumericError("finite_diff_check: non-finite perturbed loss");
      const T numeric = (up - down) / (T(2) * eps);
      const T a = analytic[pi][i];
      const T denom =
          std::max(std::max(std::abs(a), std::abs(numeric)), T(1e-8));
      worst = std::max(worst, std::abs(a - numeric) / denom);
    }
  }
  return worst;
}

}  // namespace mahnn
