// Copyright (c) 2026 the maect authors
// SPDX-License-Identifier: Apache-2.0

#include "maect/grad_check.hpp"

#include <cmath>
#include <stdexcept>

namespace maect {

Tensor finite_difference_grad(const ScalarFn& f, const Tensor& x, Scalar eps) {
  if (!(eps > 0)) throw std::invalid_argument("finite_difference_grad: eps must be positive");
  Tensor probe = x.clone();
  Tensor grad(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Scalar saved = probe.data()[i];
    probe.data()[i] = saved + eps;
    const Scalar fp = f(probe);
    probe.data()[i] = saved - eps;
    const Scalar fm = f(probe);
    probe.data()[i] = saved;
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw std::runtime_error("finite_difference_grad: non-finite function value at coordinate " + std::to_string(i));
    grad.data()[i] = (fp - fm) / (2.0 * eps);
  }
  return grad;
}

Scalar max_relative_error(const Tensor& a, const Tensor& b, Scalar floor) {
  if (a.shape() != b.shape())
    throw std::invalid_argument("max_relative_error: shape mismatch " + shape_str(a.shape()) + " vs " + shape_str(b.shape()));
  Scalar worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Scalar av = a.data()[i], bv = b.data()[i];
    const Scalar denom = std::max({std::abs(av), std::abs(bv), floor});
    worst = std::max(worst, std::abs(av - bv) / denom);
  }
  return worst;
}

}  // namespace maect
