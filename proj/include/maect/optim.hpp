// Copyright (c) 2026 the maect authors
// SPDX-License-Identifier: Apache-2.0
//
// Optimizers over named parameter groups. Groups with lr_scale 0 are skipped
// outright, so frozen parameters stay bit-identical.

#pragma once

#include "maect/tensor.hpp"

#include <string>
#include <vector>

namespace maect {

struct ParamGroup {
  std::string name;
  std::vector<Tensor> params;
  double lr_scale = 1.0;
  double weight_decay = 0.0;
};

/// AdamW with decoupled weight decay. Parameters that received no gradient in
/// a step keep their state untouched.
class AdamW {
 public:
  explicit AdamW(std::vector<ParamGroup> groups, double beta1 = 0.9, double beta2 = 0.95, double eps = 1e-8);
  void step(double lr);
  void zero_grad();
  const std::vector<ParamGroup>& groups() const { return groups_; }

 private:
  std::vector<ParamGroup> groups_;
  std::vector<std::vector<ArrayX>> m_, v_;
  double beta1_, beta2_, eps_;
  long t_ = 0;
};

/// Plain SGD with momentum, used by the linear probes.
class Sgd {
 public:
  explicit Sgd(std::vector<ParamGroup> groups, double momentum = 0.9);
  void step(double lr);
  void zero_grad();

 private:
  std::vector<ParamGroup> groups_;
  std::vector<std::vector<ArrayX>> velocity_;
  double momentum_;
};

}  // namespace maect
