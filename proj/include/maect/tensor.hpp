// Copyright (c) 2026 the maect authors
// SPDX-License-Identifier: Apache-2.0
//
// Dense row-major double tensor with an optional gradient buffer.

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace maect {

using Scalar = double;
using Shape = std::vector<int>;

using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ArrayX = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

std::size_t shape_numel(const Shape& shape);
std::string shape_str(const Shape& shape);

/// Tensor handle with shared storage: copies alias the same buffer. All ops
/// treat the trailing axis as the feature axis and the flattened leading axes
/// as rows. The gradient buffer, when present, always matches the data shape.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, bool requires_grad = false);

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, Scalar value);
  static Tensor from(Shape shape, std::vector<Scalar> values);
  static Tensor scalar(Scalar value);

  bool defined() const { return impl_ != nullptr; }
  const Shape& shape() const;
  std::size_t size() const;
  /// Rows of the implied matrix view: numel / cols(). Scalars count as 1x1.
  int rows() const;
  /// Trailing-axis length; 1 for rank-0 tensors.
  int cols() const;

  bool requires_grad() const;
  void set_requires_grad(bool value);

  Scalar* data();
  const Scalar* data() const;
  Scalar value_at(std::size_t i) const;
  Scalar scalar_value() const;  // requires numel == 1

  Eigen::Map<RowMatrix> mat();
  Eigen::Map<const RowMatrix> mat() const;
  Eigen::Map<ArrayX> array();
  Eigen::Map<const ArrayX> array() const;

  bool has_grad() const;
  /// Gradient as a flat array view, zero-allocated on first access.
  Eigen::Map<ArrayX> grad();
  Eigen::Map<const ArrayX> grad() const;  // requires has_grad()
  Eigen::Map<RowMatrix> grad_mat();
  /// Deep copy of the gradient (zeros when never touched).
  Tensor grad_tensor() const;
  void accumulate_grad(const Eigen::Ref<const ArrayX>& delta);
  void zero_grad();
  void drop_grad();

  /// New handle on the same buffer with requires_grad off.
  Tensor detach() const;
  /// Deep copy (data only, no grad).
  Tensor clone() const;
  /// Shares the buffer under a new shape of equal numel. Only for tensors
  /// outside any recorded graph; tracked reshapes go through ops.
  Tensor reshaped(Shape shape) const;

  bool all_finite() const;
  bool same_storage(const Tensor& other) const { return impl_ == other.impl_; }

 private:
  struct Impl {
    Shape shape;
    std::shared_ptr<ArrayX> data;
    std::shared_ptr<ArrayX> grad;  // lazily allocated, same length as data
    bool requires_grad = false;
  };
  std::shared_ptr<Impl> impl_;

  void ensure_defined(const char* what) const;
};

/// FNV-1a over the raw little-endian bytes of the data buffer; used by tests
/// and checkpoints to assert bit-identical parameters.
std::uint64_t content_hash(const Tensor& t);

}  // namespace maect
