// Copyright (c) 2026 the maect authors
// SPDX-License-Identifier: Apache-2.0
//
// Central finite differences, the numeric oracle every analytic gradient is
// checked against.

#pragma once

#include "maect/tensor.hpp"

#include <functional>

namespace maect {

using ScalarFn = std::function<Scalar(const Tensor&)>;

/// Central-difference estimate (f(x+eps*e_i) - f(x-eps*e_i)) / (2*eps) per
/// coordinate. f must be deterministic; non-finite evaluations are rejected.
Tensor finite_difference_grad(const ScalarFn& f, const Tensor& x, Scalar eps);

/// max_i |a_i - b_i| / max(|a_i|, |b_i|, floor)
Scalar max_relative_error(const Tensor& a, const Tensor& b, Scalar floor = 1e-8);

}  // namespace maect
