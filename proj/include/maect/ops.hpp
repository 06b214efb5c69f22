// Copyright (c) 2026 the maect authors
// SPDX-License-Identifier: Apache-2.0
//
// Differentiable primitives over Tensor. Every op validates its shape rule,
// computes eagerly through Eigen, and records a backward rule onto the active
// tape when any input requires a gradient. Ops that reduce or normalize treat
// the trailing axis as the feature axis.

#pragma once

#include "maect/tape.hpp"
#include "maect/tensor.hpp"

#include <functional>
#include <vector>

namespace maect {

// ---- arithmetic ----
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, Scalar s);
/// x [n,d] + bias [d], broadcast over rows.
Tensor add_rowvec(const Tensor& x, const Tensor& bias);

// ---- linear algebra ----
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);

// ---- shape ----
Tensor concat_rows(const std::vector<Tensor>& parts);
Tensor gather_rows(const Tensor& x, std::vector<int> indices);
Tensor repeat_row(const Tensor& row, int n);
Tensor reshape(const Tensor& x, Shape shape);
/// Mean over consecutive groups of `group` rows: [n*group, d] -> [n, d].
Tensor group_mean_rows(const Tensor& x, int group);

// ---- normalization & activations ----
Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, Scalar eps);

/// Persistent BatchNorm buffers, updated only in training mode.
struct BatchNormState {
  Tensor running_mean;
  Tensor running_var;
};

Tensor batch_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, BatchNormState& state,
                  Scalar momentum, Scalar eps, bool training);
Tensor softmax_rows(const Tensor& x);
Tensor gelu(const Tensor& x);
Tensor relu(const Tensor& x);
Tensor l2_normalize_rows(const Tensor& x);

/// Scaled dot-product attention. q,k,v are [batch*tokens, heads*head_dim];
/// head h of sample b lives in the block (b*tokens, h*head_dim). Softmax over
/// keys at scale 1/sqrt(head_dim).
Tensor attention(const Tensor& q, const Tensor& k, const Tensor& v, int batch, int heads);

// ---- reductions & losses ----
Tensor sum_all(const Tensor& x);
Tensor mean_all(const Tensor& x);
Tensor cross_entropy_logits(const Tensor& logits, const std::vector<int>& targets);
Tensor mse_loss(const Tensor& pred, const Tensor& target);
Tensor l1_loss(const Tensor& pred, const Tensor& target);

// ---- control ----
/// Identity with the gradient path severed.
Tensor stop_gradient(const Tensor& x);

/// Runs a composed graph over validated inputs. Rejects non-finite input
/// data; records onto `tape` when given and any input requires grad. Two
/// calls with identical inputs produce bit-identical outputs.
using Graph = std::function<std::vector<Tensor>(const std::vector<Tensor>&)>;
std::vector<Tensor> evaluate(const Graph& graph, const std::vector<Tensor>& inputs, Tape* tape = nullptr);

}  // namespace maect
