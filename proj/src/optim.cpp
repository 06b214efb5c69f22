// Copyright (c) 2026 the maect authors
// SPDX-License-Identifier: Apache-2.0

#include "maect/optim.hpp"

#include <cmath>

namespace maect {

AdamW::AdamW(std::vector<ParamGroup> groups, double beta1, double beta2, double eps)
    : groups_(std::move(groups)), beta1_(beta1), beta2_(beta2), eps_(eps) {
  m_.resize(groups_.size());
  v_.resize(groups_.size());
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    for (const Tensor& p : groups_[g].params) {
      m_[g].emplace_back(ArrayX::Zero(static_cast<Eigen::Index>(p.size())));
      v_[g].emplace_back(ArrayX::Zero(static_cast<Eigen::Index>(p.size())));
    }
  }
}

void AdamW::step(double lr) {
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    ParamGroup& grp = groups_[g];
    if (grp.lr_scale == 0.0) continue;
    const double lr_eff = lr * grp.lr_scale;
    for (std::size_t i = 0; i < grp.params.size(); ++i) {
      Tensor& p = grp.params[i];
      if (!p.has_grad()) continue;
      auto grad = p.grad();
      ArrayX& m = m_[g][i];
      ArrayX& v = v_[g][i];
      m = beta1_ * m + (1.0 - beta1_) * grad;
      v = beta2_ * v + (1.0 - beta2_) * grad.square();
      if (grp.weight_decay != 0.0) p.array() -= lr_eff * grp.weight_decay * p.array();
      p.array() -= lr_eff * (m / bc1) / ((v / bc2).sqrt() + eps_);
    }
  }
}

void AdamW::zero_grad() {
  for (ParamGroup& g : groups_)
    for (Tensor& p : g.params) p.zero_grad();
}

Sgd::Sgd(std::vector<ParamGroup> groups, double momentum) : groups_(std::move(groups)), momentum_(momentum) {
  velocity_.resize(groups_.size());
  for (std::size_t g = 0; g < groups_.size(); ++g)
    for (const Tensor& p : groups_[g].params)
      velocity_[g].emplace_back(ArrayX::Zero(static_cast<Eigen::Index>(p.size())));
}

void Sgd::step(double lr) {
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    ParamGroup& grp = groups_[g];
    if (grp.lr_scale == 0.0) continue;
    const double lr_eff = lr * grp.lr_scale;
    for (std::size_t i = 0; i < grp.params.size(); ++i) {
      Tensor& p = grp.params[i];
      if (!p.has_grad()) continue;
      ArrayX& vel = velocity_[g][i];
      ArrayX grad = p.grad();
      if (grp.weight_decay != 0.0) grad += grp.weight_decay * p.array();
      vel = momentum_ * vel + grad;
      p.array() -= lr_eff * vel;
    }
  }
}

void Sgd::zero_grad() {
  for (ParamGroup& g : groups_)
    for (Tensor& p : g.params) p.zero_grad();
}

}  // namespace maect
