// Copyright (c) 2026 the maect authors
// SPDX-License-Identifier: Apache-2.0

#include "maect/tensor.hpp"

#include <cstring>
#include <sstream>

namespace maect {

std::size_t shape_numel(const Shape& shape) {
  std::size_t n = 1;
  for (int d : shape) {
    if (d <= 0) throw std::invalid_argument("tensor: non-positive shape dimension in " + shape_str(shape));
    n *= static_cast<std::size_t>(d);
  }
  return n;
}

std::string shape_str(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ',';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

Tensor::Tensor(Shape shape, bool requires_grad) {
  const std::size_t n = shape_numel(shape);
  impl_ = std::make_shared<Impl>();
  impl_->shape = std::move(shape);
  impl_->data = std::make_shared<ArrayX>(ArrayX::Zero(static_cast<Eigen::Index>(n)));
  impl_->requires_grad = requires_grad;
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) { return Tensor(std::move(shape), requires_grad); }

Tensor Tensor::full(Shape shape, Scalar value) {
  Tensor t(std::move(shape));
  t.array().setConstant(value);
  return t;
}

Tensor Tensor::from(Shape shape, std::vector<Scalar> values) {
  Tensor t(std::move(shape));
  if (t.size() != values.size())
    throw std::invalid_argument("tensor: value count " + std::to_string(values.size()) +
                                " does not match shape " + shape_str(t.shape()));
  std::memcpy(t.data(), values.data(), values.size() * sizeof(Scalar));
  return t;
}

Tensor Tensor::scalar(Scalar value) { return from({1}, {value}); }

void Tensor::ensure_defined(const char* what) const {
  if (!impl_) throw std::runtime_error(std::string("tensor: ") + what + " on undefined tensor");
}

const Shape& Tensor::shape() const {
  ensure_defined("shape()");
  return impl_->shape;
}

std::size_t Tensor::size() const {
  ensure_defined("size()");
  return static_cast<std::size_t>(impl_->data->size());
}

int Tensor::cols() const {
  ensure_defined("cols()");
  return impl_->shape.empty() ? 1 : impl_->shape.back();
}

int Tensor::rows() const { return static_cast<int>(size()) / cols(); }

bool Tensor::requires_grad() const { return impl_ && impl_->requires_grad; }

void Tensor::set_requires_grad(bool value) {
  ensure_defined("set_requires_grad()");
  impl_->requires_grad = value;
}

Scalar* Tensor::data() {
  ensure_defined("data()");
  return impl_->data->data();
}

const Scalar* Tensor::data() const {
  ensure_defined("data()");
  return impl_->data->data();
}

Scalar Tensor::value_at(std::size_t i) const { return (*impl_->data)(static_cast<Eigen::Index>(i)); }

Scalar Tensor::scalar_value() const {
  if (size() != 1) throw std::runtime_error("tensor: scalar_value() on tensor of shape " + shape_str(shape()));
  return (*impl_->data)(0);
}

Eigen::Map<RowMatrix> Tensor::mat() { return {data(), rows(), cols()}; }
Eigen::Map<const RowMatrix> Tensor::mat() const { return {data(), rows(), cols()}; }
Eigen::Map<ArrayX> Tensor::array() { return {data(), static_cast<Eigen::Index>(size())}; }
Eigen::Map<const ArrayX> Tensor::array() const { return {data(), static_cast<Eigen::Index>(size())}; }

bool Tensor::has_grad() const { return impl_ && impl_->grad != nullptr; }

Eigen::Map<ArrayX> Tensor::grad() {
  ensure_defined("grad()");
  if (!impl_->grad) impl_->grad = std::make_shared<ArrayX>(ArrayX::Zero(impl_->data->size()));
  return {impl_->grad->data(), impl_->grad->size()};
}

Eigen::Map<const ArrayX> Tensor::grad() const {
  if (!has_grad()) throw std::runtime_error("tensor: grad() read on tensor without gradient");
  return {impl_->grad->data(), impl_->grad->size()};
}

Eigen::Map<RowMatrix> Tensor::grad_mat() {
  grad();
  return {impl_->grad->data(), rows(), cols()};
}

Tensor Tensor::grad_tensor() const {
  Tensor g(shape());
  if (has_grad()) g.array() = *impl_->grad;
  return g;
}

void Tensor::accumulate_grad(const Eigen::Ref<const ArrayX>& delta) {
  if (delta.size() != static_cast<Eigen::Index>(size()))
    throw std::runtime_error("tensor: gradient shape mismatch for tensor " + shape_str(shape()));
  grad() += delta;
}

void Tensor::zero_grad() {
  if (has_grad()) impl_->grad->setZero();
}

void Tensor::drop_grad() {
  if (impl_) impl_->grad.reset();
}

Tensor Tensor::detach() const {
  ensure_defined("detach()");
  Tensor t;
  t.impl_ = std::make_shared<Impl>();
  t.impl_->shape = impl_->shape;
  t.impl_->data = impl_->data;
  t.impl_->requires_grad = false;
  return t;
}

Tensor Tensor::clone() const {
  ensure_defined("clone()");
  Tensor t(shape());
  t.array() = array();
  return t;
}

Tensor Tensor::reshaped(Shape shape) const {
  ensure_defined("reshaped()");
  if (shape_numel(shape) != size())
    throw std::invalid_argument("tensor: reshape " + shape_str(this->shape()) + " -> " + shape_str(shape) +
                                " changes element count");
  Tensor t;
  t.impl_ = std::make_shared<Impl>();
  t.impl_->shape = std::move(shape);
  t.impl_->data = impl_->data;
  t.impl_->grad = impl_->grad;
  t.impl_->requires_grad = impl_->requires_grad;
  return t;
}

bool Tensor::all_finite() const { return array().isFinite().all(); }

std::uint64_t content_hash(const Tensor& t) {
  const auto* bytes = reinterpret_cast<const unsigned char*>(t.data());
  const std::size_t n = t.size() * sizeof(Scalar);
  std::uint64_t h = 1469598103934665603ull;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace maect
