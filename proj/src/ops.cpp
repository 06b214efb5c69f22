// Copyright (c) 2026 the maect authors
// SPDX-License-Identifier: Apache-2.0

#include "maect/ops.hpp"

#include <cmath>
#include <string>

namespace maect {

namespace {

constexpr Scalar kInvSqrt2 = 0.7071067811865475244;
constexpr Scalar kInvSqrt2Pi = 0.3989422804014326779;

[[noreturn]] void fail(const char* op, const std::string& msg) {
  throw std::invalid_argument(std::string(op) + ": " + msg);
}

void check_same_shape(const char* op, const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) fail(op, "shape mismatch " + shape_str(a.shape()) + " vs " + shape_str(b.shape()));
}

bool recording(std::initializer_list<const Tensor*> inputs) {
  if (!active_tape()) return false;
  for (const Tensor* t : inputs)
    if (t->requires_grad()) return true;
  return false;
}

void record_op(const char* op, std::vector<Tensor> inputs, Tensor output, std::function<void()> fn) {
  output.set_requires_grad(true);
  active_tape()->record({op, std::move(inputs), std::move(output), std::move(fn)});
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
  check_same_shape("add", a, b);
  Tensor out(a.shape());
  out.array() = a.array() + b.array();
  if (recording({&a, &b})) {
    Tensor ta = a, tb = b, to = out;
    record_op("add", {a, b}, out, [ta, tb, to]() mutable {
      if (ta.requires_grad()) ta.grad() += to.grad();
      if (tb.requires_grad()) tb.grad() += to.grad();
    });
  }
  return out;
}

Tensor sub(const Tensor& a, const Tensor& b) {
  check_same_shape("sub", a, b);
  Tensor out(a.shape());
  out.array() = a.array() - b.array();
  if (recording({&a, &b})) {
    Tensor ta = a, tb = b, to = out;
    record_op("sub", {a, b}, out, [ta, tb, to]() mutable {
      if (ta.requires_grad()) ta.grad() += to.grad();
      if (tb.requires_grad()) tb.grad() -= to.grad();
    });
  }
  return out;
}

Tensor mul(const Tensor& a, const Tensor& b) {
  check_same_shape("mul", a, b);
  Tensor out(a.shape());
  out.array() = a.array() * b.array();
  if (recording({&a, &b})) {
    Tensor ta = a, tb = b, to = out;
    record_op("mul", {a, b}, out, [ta, tb, to]() mutable {
      if (ta.requires_grad()) ta.grad() += to.grad() * tb.array();
      if (tb.requires_grad()) tb.grad() += to.grad() * ta.array();
    });
  }
  return out;
}

Tensor scale(const Tensor& a, Scalar s) {
  Tensor out(a.shape());
  out.array() = a.array() * s;
  if (recording({&a})) {
    Tensor ta = a, to = out;
    record_op("scale", {a}, out, [ta, to, s]() mutable {
      if (ta.requires_grad()) ta.grad() += to.grad() * s;
    });
  }
  return out;
}

Tensor add_rowvec(const Tensor& x, const Tensor& bias) {
  if (bias.size() != static_cast<std::size_t>(x.cols()))
    fail("add_rowvec", "bias length " + std::to_string(bias.size()) + " does not match row width " +
                           std::to_string(x.cols()));
  Tensor out(x.shape());
  out.mat() = x.mat().rowwise() + bias.mat().row(0);
  if (recording({&x, &bias})) {
    Tensor tx = x, tb = bias, to = out;
    record_op("add_rowvec", {x, bias}, out, [tx, tb, to]() mutable {
      if (tx.requires_grad()) tx.grad() += to.grad();
      if (tb.requires_grad()) tb.grad_mat().row(0) += to.grad_mat().colwise().sum();
    });
  }
  return out;
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.shape().size() != 2 || b.shape().size() != 2)
    fail("matmul", "expects rank-2 operands, got " + shape_str(a.shape()) + " and " + shape_str(b.shape()));
  if (a.cols() != b.rows())
    fail("matmul", "inner dimensions disagree: " + shape_str(a.shape()) + " x " + shape_str(b.shape()));
  Tensor out({a.rows(), b.cols()});
  out.mat().noalias() = a.mat() * b.mat();
  if (recording({&a, &b})) {
    Tensor ta = a, tb = b, to = out;
    record_op("matmul", {a, b}, out, [ta, tb, to]() mutable {
      auto g = to.grad_mat();
      if (ta.requires_grad()) ta.grad_mat().noalias() += g * tb.mat().transpose();
      if (tb.requires_grad()) tb.grad_mat().noalias() += ta.mat().transpose() * g;
    });
  }
  return out;
}

Tensor transpose(const Tensor& a) {
  if (a.shape().size() != 2) fail("transpose", "expects rank-2 operand, got " + shape_str(a.shape()));
  Tensor out({a.cols(), a.rows()});
  out.mat() = a.mat().transpose();
  if (recording({&a})) {
    Tensor ta = a, to = out;
    record_op("transpose", {a}, out, [ta, to]() mutable {
      if (ta.requires_grad()) ta.grad_mat() += to.grad_mat().transpose();
    });
  }
  return out;
}

Tensor concat_rows(const std::vector<Tensor>& parts) {
  if (parts.empty()) fail("concat_rows", "no operands");
  const int cols = parts.front().cols();
  int rows = 0;
  for (const Tensor& p : parts) {
    if (p.cols() != cols) fail("concat_rows", "row width mismatch: " + shape_str(p.shape()));
    rows += p.rows();
  }
  Tensor out({rows, cols});
  int at = 0;
  for (const Tensor& p : parts) {
    out.mat().middleRows(at, p.rows()) = p.mat();
    at += p.rows();
  }
  bool rec = active_tape() != nullptr;
  if (rec) {
    rec = false;
    for (const Tensor& p : parts) rec = rec || p.requires_grad();
  }
  if (rec) {
    std::vector<Tensor> ins = parts;
    Tensor to = out;
    record_op("concat_rows", parts, out, [ins, to]() mutable {
      int row = 0;
      for (Tensor& p : ins) {
        if (p.requires_grad()) p.grad_mat() += to.grad_mat().middleRows(row, p.rows());
        row += p.rows();
      }
    });
  }
  return out;
}

Tensor gather_rows(const Tensor& x, std::vector<int> indices) {
  const int n = x.rows();
  for (int i : indices)
    if (i < 0 || i >= n) fail("gather_rows", "index " + std::to_string(i) + " out of range [0," + std::to_string(n) + ")");
  Tensor out({static_cast<int>(indices.size()), x.cols()});
  for (std::size_t r = 0; r < indices.size(); ++r)
    out.mat().row(static_cast<int>(r)) = x.mat().row(indices[r]);
  if (recording({&x})) {
    Tensor tx = x, to = out;
    record_op("gather_rows", {x}, out, [tx, to, idx = std::move(indices)]() mutable {
      auto g = to.grad_mat();
      auto gx = tx.grad_mat();
      for (std::size_t r = 0; r < idx.size(); ++r) gx.row(idx[r]) += g.row(static_cast<int>(r));
    });
  }
  return out;
}

Tensor repeat_row(const Tensor& row, int n) {
  if (row.rows() != 1) fail("repeat_row", "expects a single row, got " + shape_str(row.shape()));
  if (n < 1) fail("repeat_row", "count must be positive");
  Tensor out({n, row.cols()});
  out.mat().rowwise() = row.mat().row(0);
  if (recording({&row})) {
    Tensor tr = row, to = out;
    record_op("repeat_row", {row}, out, [tr, to]() mutable {
      if (tr.requires_grad()) tr.grad_mat().row(0) += to.grad_mat().colwise().sum();
    });
  }
  return out;
}

Tensor reshape(const Tensor& x, Shape shape) {
  if (shape_numel(shape) != x.size())
    fail("reshape", shape_str(x.shape()) + " -> " + shape_str(shape) + " changes element count");
  Tensor out(shape);
  out.array() = x.array();
  if (recording({&x})) {
    Tensor tx = x, to = out;
    record_op("reshape", {x}, out, [tx, to]() mutable {
      if (tx.requires_grad()) tx.grad() += to.grad();
    });
  }
  return out;
}

Tensor group_mean_rows(const Tensor& x, int group) {
  if (group < 1 || x.rows() % group != 0)
    fail("group_mean_rows", "rows " + std::to_string(x.rows()) + " not divisible into groups of " + std::to_string(group));
  const int n = x.rows() / group;
  Tensor out({n, x.cols()});
  for (int r = 0; r < n; ++r) out.mat().row(r) = x.mat().middleRows(r * group, group).colwise().mean();
  if (recording({&x})) {
    Tensor tx = x, to = out;
    record_op("group_mean_rows", {x}, out, [tx, to, group]() mutable {
      auto g = to.grad_mat();
      auto gx = tx.grad_mat();
      const Scalar inv = 1.0 / group;
      for (int r = 0; r < g.rows(); ++r) gx.middleRows(r * group, group).rowwise() += g.row(r) * inv;
    });
  }
  return out;
}

Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, Scalar eps) {
  const int d = x.cols();
  if (gamma.size() != static_cast<std::size_t>(d) || beta.size() != static_cast<std::size_t>(d))
    fail("layer_norm", "affine parameters do not match feature width " + std::to_string(d));
  const int n = x.rows();
  Tensor out(x.shape());
  Tensor xhat({n, d});
  Tensor inv_std({n, 1});
  {
    auto xm = x.mat();
    auto hm = xhat.mat();
#pragma omp parallel for schedule(static)
    for (int r = 0; r < n; ++r) {
      const Scalar mean = xm.row(r).mean();
      const Scalar var = (xm.row(r).array() - mean).square().mean();
      const Scalar is = 1.0 / std::sqrt(var + eps);
      inv_std.data()[r] = is;
      hm.row(r) = (xm.row(r).array() - mean) * is;
    }
    out.mat() = ((hm.array().rowwise() * gamma.mat().row(0).array()).rowwise() + beta.mat().row(0).array()).matrix();
  }
  if (recording({&x, &gamma, &beta})) {
    Tensor tx = x, tg = gamma, tb = beta, to = out;
    record_op("layer_norm", {x, gamma, beta}, out, [tx, tg, tb, to, xhat, inv_std, d]() mutable {
      auto g = to.grad_mat();
      auto hm = xhat.mat();
      if (tb.requires_grad()) tb.grad_mat().row(0) += g.colwise().sum();
      if (tg.requires_grad()) tg.grad_mat().row(0) += (g.array() * hm.array()).colwise().sum().matrix();
      if (tx.requires_grad()) {
        auto gx = tx.grad_mat();
        const auto gr = tg.mat().row(0);
        const int rows = static_cast<int>(g.rows());
#pragma omp parallel for schedule(static)
        for (int r = 0; r < rows; ++r) {
          Eigen::Array<Scalar, 1, Eigen::Dynamic> dh = g.row(r).array() * gr.array();
          const Scalar m1 = dh.mean();
          const Scalar m2 = (dh * hm.row(r).array()).mean();
          gx.row(r) += ((dh - m1 - hm.row(r).array() * m2) * inv_std.data()[r]).matrix();
        }
      }
    });
  }
  return out;
}

Tensor batch_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, BatchNormState& state,
                  Scalar momentum, Scalar eps, bool training) {
  const int d = x.cols();
  const int n = x.rows();
  if (gamma.size() != static_cast<std::size_t>(d) || beta.size() != static_cast<std::size_t>(d))
    fail("batch_norm", "affine parameters do not match feature width " + std::to_string(d));
  if (state.running_mean.size() != static_cast<std::size_t>(d) || state.running_var.size() != static_cast<std::size_t>(d))
    fail("batch_norm", "running statistics do not match feature width " + std::to_string(d));

  Eigen::RowVectorXd mean(d), var(d);
  if (training) {
    mean = x.mat().colwise().mean();
    var = (x.mat().rowwise() - mean).array().square().colwise().mean();
    // Biased batch variance feeds both the normalization and the buffers.
    state.running_mean.mat().row(0) = (1.0 - momentum) * state.running_mean.mat().row(0) + momentum * mean;
    state.running_var.mat().row(0) = (1.0 - momentum) * state.running_var.mat().row(0) + momentum * var;
  } else {
    mean = state.running_mean.mat().row(0);
    var = state.running_var.mat().row(0);
  }
  Eigen::RowVectorXd inv_std = (var.array() + eps).rsqrt();

  Tensor xhat({n, d});
  xhat.mat() = (x.mat().rowwise() - mean).array().rowwise() * inv_std.array();
  Tensor out(x.shape());
  out.mat() = (xhat.mat().array().rowwise() * gamma.mat().row(0).array()).rowwise() + beta.mat().row(0).array();

  if (recording({&x, &gamma, &beta})) {
    Tensor tx = x, tg = gamma, tb = beta, to = out;
    Eigen::RowVectorXd is = inv_std;
    record_op("batch_norm", {x, gamma, beta}, out, [tx, tg, tb, to, xhat, is, training, n]() mutable {
      auto g = to.grad_mat();
      auto hm = xhat.mat();
      if (tb.requires_grad()) tb.grad_mat().row(0) += g.colwise().sum();
      if (tg.requires_grad()) tg.grad_mat().row(0) += (g.array() * hm.array()).colwise().sum().matrix();
      if (tx.requires_grad()) {
        Eigen::MatrixXd dh = g.array().rowwise() * tg.mat().row(0).array();
        if (training) {
          Eigen::RowVectorXd m1 = dh.colwise().mean();
          Eigen::RowVectorXd m2 = (dh.array() * hm.array()).colwise().mean();
          tx.grad_mat() +=
              (((dh.rowwise() - m1).array() - hm.array().rowwise() * m2.array()).rowwise() * is.array()).matrix();
        } else {
          tx.grad_mat() += (dh.array().rowwise() * is.array()).matrix();
        }
      }
      (void)n;
    });
  }
  return out;
}

Tensor softmax_rows(const Tensor& x) {
  Tensor out(x.shape());
  auto xm = x.mat();
  auto om = out.mat();
  const int n = x.rows();
#pragma omp parallel for schedule(static)
  for (int r = 0; r < n; ++r) {
    const Scalar m = xm.row(r).maxCoeff();
    om.row(r) = (xm.row(r).array() - m).exp();
    om.row(r) /= om.row(r).sum();
  }
  if (recording({&x})) {
    Tensor tx = x, to = out;
    record_op("softmax", {x}, out, [tx, to]() mutable {
      if (!tx.requires_grad()) return;
      auto p = to.mat();
      auto g = to.grad_mat();
      auto gx = tx.grad_mat();
      const int rows = static_cast<int>(p.rows());
#pragma omp parallel for schedule(static)
      for (int r = 0; r < rows; ++r) {
        const Scalar dot = g.row(r).dot(p.row(r));
        gx.row(r) += (p.row(r).array() * (g.row(r).array() - dot)).matrix();
      }
    });
  }
  return out;
}

Tensor gelu(const Tensor& x) {
  Tensor out(x.shape());
  out.array() = x.array() * 0.5 * (1.0 + (x.array() * kInvSqrt2).erf());
  if (recording({&x})) {
    Tensor tx = x, to = out;
    record_op("gelu", {x}, out, [tx, to]() mutable {
      if (!tx.requires_grad()) return;
      auto xa = tx.array();
      ArrayX phi = 0.5 * (1.0 + (xa * kInvSqrt2).erf());
      ArrayX pdf = (-0.5 * xa.square()).exp() * kInvSqrt2Pi;
      tx.grad() += to.grad() * (phi + xa * pdf);
    });
  }
  return out;
}

Tensor relu(const Tensor& x) {
  Tensor out(x.shape());
  out.array() = x.array().max(0.0);
  if (recording({&x})) {
    Tensor tx = x, to = out;
    record_op("relu", {x}, out, [tx, to]() mutable {
      if (tx.requires_grad()) tx.grad() += to.grad() * (tx.array() > 0.0).cast<Scalar>();
    });
  }
  return out;
}

Tensor l2_normalize_rows(const Tensor& x) {
  const int n = x.rows();
  Tensor out(x.shape());
  Tensor inv_norm({n, 1});
  for (int r = 0; r < n; ++r) {
    const Scalar nrm = std::max(x.mat().row(r).norm(), 1e-12);
    inv_norm.data()[r] = 1.0 / nrm;
    out.mat().row(r) = x.mat().row(r) * inv_norm.data()[r];
  }
  if (recording({&x})) {
    Tensor tx = x, to = out;
    record_op("l2_normalize", {x}, out, [tx, to, inv_norm]() mutable {
      if (!tx.requires_grad()) return;
      auto y = to.mat();
      auto g = to.grad_mat();
      auto gx = tx.grad_mat();
      for (int r = 0; r < y.rows(); ++r) {
        const Scalar dot = g.row(r).dot(y.row(r));
        gx.row(r) += (g.row(r) - y.row(r) * dot) * inv_norm.data()[r];
      }
    });
  }
  return out;
}

Tensor attention(const Tensor& q, const Tensor& k, const Tensor& v, int batch, int heads) {
  check_same_shape("attention", q, k);
  check_same_shape("attention", q, v);
  if (batch < 1 || heads < 1 || q.rows() % batch != 0 || q.cols() % heads != 0)
    fail("attention", "rows " + std::to_string(q.rows()) + " / batch " + std::to_string(batch) + " or cols " +
                          std::to_string(q.cols()) + " / heads " + std::to_string(heads) + " do not divide");
  const int tokens = q.rows() / batch;
  const int head_dim = q.cols() / heads;
  const Scalar sc = 1.0 / std::sqrt(static_cast<Scalar>(head_dim));

  Tensor out(q.shape());
  Tensor probs({batch * heads * tokens, tokens});
  const int groups = batch * heads;
  {
    auto qm = q.mat();
    auto km = k.mat();
    auto vm = v.mat();
    auto om = out.mat();
    auto pm = probs.mat();
#pragma omp parallel for schedule(static)
    for (int g = 0; g < groups; ++g) {
      const int b = g / heads, h = g % heads;
      auto qb = qm.block(b * tokens, h * head_dim, tokens, head_dim);
      auto kb = km.block(b * tokens, h * head_dim, tokens, head_dim);
      auto vb = vm.block(b * tokens, h * head_dim, tokens, head_dim);
      auto pb = pm.middleRows(g * tokens, tokens);
      pb.noalias() = qb * kb.transpose();
      pb *= sc;
      for (int r = 0; r < tokens; ++r) {
        const Scalar m = pb.row(r).maxCoeff();
        pb.row(r) = (pb.row(r).array() - m).exp();
        pb.row(r) /= pb.row(r).sum();
      }
      om.block(b * tokens, h * head_dim, tokens, head_dim).noalias() = pb * vb;
    }
  }
  if (recording({&q, &k, &v})) {
    Tensor tq = q, tk = k, tv = v, to = out;
    record_op("attention", {q, k, v}, out, [tq, tk, tv, to, probs, batch, heads, tokens, head_dim, sc]() mutable {
      // Pre-touch gradients so the parallel region only writes disjoint blocks.
      auto gq = tq.grad_mat();
      auto gk = tk.grad_mat();
      auto gv = tv.grad_mat();
      auto go = to.grad_mat();
      auto pm = probs.mat();
      const bool nq = tq.requires_grad(), nk = tk.requires_grad(), nv = tv.requires_grad();
      const int groups = batch * heads;
#pragma omp parallel for schedule(static)
      for (int g = 0; g < groups; ++g) {
        const int b = g / heads, h = g % heads;
        auto qb = tq.mat().block(b * tokens, h * head_dim, tokens, head_dim);
        auto kb = tk.mat().block(b * tokens, h * head_dim, tokens, head_dim);
        auto vb = tv.mat().block(b * tokens, h * head_dim, tokens, head_dim);
        auto pb = pm.middleRows(g * tokens, tokens);
        auto gob = go.block(b * tokens, h * head_dim, tokens, head_dim);
        if (nv) gv.block(b * tokens, h * head_dim, tokens, head_dim).noalias() += pb.transpose() * gob;
        if (nq || nk) {
          RowMatrix dp = gob * vb.transpose();
          RowMatrix ds(tokens, tokens);
          for (int r = 0; r < tokens; ++r) {
            const Scalar dot = dp.row(r).dot(pb.row(r));
            ds.row(r) = (pb.row(r).array() * (dp.row(r).array() - dot)).matrix() * sc;
          }
          if (nq) gq.block(b * tokens, h * head_dim, tokens, head_dim).noalias() += ds * kb;
          if (nk) gk.block(b * tokens, h * head_dim, tokens, head_dim).noalias() += ds.transpose() * qb;
        }
      }
    });
  }
  return out;
}

Tensor sum_all(const Tensor& x) {
  Tensor out = Tensor::scalar(x.array().sum());
  if (recording({&x})) {
    Tensor tx = x, to = out;
    record_op("sum", {x}, out, [tx, to]() mutable {
      if (tx.requires_grad()) tx.grad() += to.grad()(0);
    });
  }
  return out;
}

Tensor mean_all(const Tensor& x) {
  Tensor out = Tensor::scalar(x.array().mean());
  if (recording({&x})) {
    Tensor tx = x, to = out;
    const Scalar inv = 1.0 / static_cast<Scalar>(x.size());
    record_op("mean", {x}, out, [tx, to, inv]() mutable {
      if (tx.requires_grad()) tx.grad() += to.grad()(0) * inv;
    });
  }
  return out;
}

Tensor cross_entropy_logits(const Tensor& logits, const std::vector<int>& targets) {
  const int n = logits.rows(), c = logits.cols();
  if (static_cast<int>(targets.size()) != n)
    fail("cross_entropy", "targets length " + std::to_string(targets.size()) + " does not match batch " + std::to_string(n));
  for (int t : targets)
    if (t < 0 || t >= c) fail("cross_entropy", "target class " + std::to_string(t) + " out of range [0," + std::to_string(c) + ")");

  Tensor probs({n, c});
  Scalar loss = 0.0;
  auto lm = logits.mat();
  auto pm = probs.mat();
  for (int r = 0; r < n; ++r) {
    const Scalar m = lm.row(r).maxCoeff();
    const Scalar lse = m + std::log((lm.row(r).array() - m).exp().sum());
    pm.row(r) = (lm.row(r).array() - lse).exp();
    loss += lse - lm(r, targets[static_cast<std::size_t>(r)]);
  }
  Tensor out = Tensor::scalar(loss / n);
  if (recording({&logits})) {
    Tensor tl = logits, to = out;
    record_op("cross_entropy", {logits}, out, [tl, to, probs, targets]() mutable {
      if (!tl.requires_grad()) return;
      const Scalar s = to.grad()(0) / static_cast<Scalar>(probs.rows());
      RowMatrix d = probs.mat() * s;
      for (int r = 0; r < d.rows(); ++r) d(r, targets[static_cast<std::size_t>(r)]) -= s;
      tl.grad_mat() += d;
    });
  }
  return out;
}

Tensor mse_loss(const Tensor& pred, const Tensor& target) {
  check_same_shape("mse", pred, target);
  Tensor out = Tensor::scalar((pred.array() - target.array()).square().mean());
  if (recording({&pred, &target})) {
    Tensor tp = pred, tt = target, to = out;
    const Scalar inv = 2.0 / static_cast<Scalar>(pred.size());
    record_op("mse", {pred, target}, out, [tp, tt, to, inv]() mutable {
      ArrayX d = (tp.array() - tt.array()) * (inv * to.grad()(0));
      if (tp.requires_grad()) tp.grad() += d;
      if (tt.requires_grad()) tt.grad() -= d;
    });
  }
  return out;
}

Tensor l1_loss(const Tensor& pred, const Tensor& target) {
  check_same_shape("l1", pred, target);
  Tensor out = Tensor::scalar((pred.array() - target.array()).abs().mean());
  if (recording({&pred, &target})) {
    Tensor tp = pred, tt = target, to = out;
    const Scalar inv = 1.0 / static_cast<Scalar>(pred.size());
    record_op("l1", {pred, target}, out, [tp, tt, to, inv]() mutable {
      ArrayX d = (tp.array() - tt.array()).sign() * (inv * to.grad()(0));
      if (tp.requires_grad()) tp.grad() += d;
      if (tt.requires_grad()) tt.grad() -= d;
    });
  }
  return out;
}

Tensor stop_gradient(const Tensor& x) { return x.detach(); }

std::vector<Tensor> evaluate(const Graph& graph, const std::vector<Tensor>& inputs, Tape* tape) {
  for (std::size_t i = 0; i < inputs.size(); ++i)
    if (!inputs[i].all_finite())
      throw std::invalid_argument("evaluate: non-finite values in input " + std::to_string(i));
  bool needs_tape = false;
  for (const Tensor& t : inputs) needs_tape = needs_tape || t.requires_grad();
  if (tape != nullptr && needs_tape) {
    TapeScope scope(*tape);
    return graph(inputs);
  }
  TapeScope off;  // plain evaluation records nothing
  return graph(inputs);
}

}  // namespace maect
