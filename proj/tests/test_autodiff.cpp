// Copyright (c) 2026 the maect authors
// SPDX-License-Identifier: Apache-2.0
//
// Gradient checks for every primitive against central finite differences,
// plus tape laws (accumulation, purity, error paths).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "maect/grad_check.hpp"
#include "maect/ops.hpp"
#include "maect/rng.hpp"
#include "maect/tape.hpp"

#include <cmath>

using namespace maect;

namespace {

Tensor random_tensor(Rng& rng, Shape shape, double lo = -1.0, double hi = 1.0) {
  Tensor t(std::move(shape), true);
  for (std::size_t i = 0; i < t.size(); ++i) t.data()[i] = rng.uniform(lo, hi);
  return t;
}

// Checks d(sum(c .* op(inputs)))/d(input_i) for every input against central
// finite differences. The random weighting c catches wrong cross-terms that a
// plain sum could cancel.
using MultiFn = std::function<Tensor(const std::vector<Tensor>&)>;

double check_gradients(const MultiFn& fn, std::vector<Tensor> inputs, Rng& rng, double eps = 1e-6) {
  Tensor probe_out;
  {
    TapeScope off;
    probe_out = fn(inputs);
  }
  Tensor weights = random_tensor(rng, probe_out.shape());
  weights.set_requires_grad(false);

  Tape tape;
  std::vector<Tensor> tracked = inputs;
  {
    TapeScope scope(tape);
    Tensor out = fn(tracked);
    Tensor weighted = sum_all(mul(out, weights));
    backward(tape, Tensor::scalar(1.0));
    (void)weighted;
  }

  double worst = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (!inputs[i].requires_grad()) continue;
    auto f = [&, i](const Tensor& x) {
      std::vector<Tensor> args;
      for (std::size_t j = 0; j < inputs.size(); ++j) args.push_back(j == i ? x.detach() : inputs[j].detach());
      TapeScope off;
      Tensor out = fn(args);
      return (out.array() * weights.array()).sum();
    };
    Tensor numeric = finite_difference_grad(f, inputs[i], eps);
    worst = std::max(worst, max_relative_error(tracked[i].grad_tensor(), numeric));
  }
  return worst;
}

}  // namespace

TEST_CASE("elementwise and matmul gradients vs finite differences") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Tensor a = random_tensor(rng, {3, 4});
    Tensor b = random_tensor(rng, {3, 4});
    CHECK(check_gradients([](const std::vector<Tensor>& in) { return add(in[0], in[1]); }, {a, b}, rng) < 1e-5);
    CHECK(check_gradients([](const std::vector<Tensor>& in) { return sub(in[0], in[1]); }, {a, b}, rng) < 1e-5);
    CHECK(check_gradients([](const std::vector<Tensor>& in) { return mul(in[0], in[1]); }, {a, b}, rng) < 1e-5);
    CHECK(check_gradients([](const std::vector<Tensor>& in) { return scale(in[0], -1.7); }, {a}, rng) < 1e-5);

    Tensor m = random_tensor(rng, {3, 5});
    Tensor n = random_tensor(rng, {5, 4});
    CHECK(check_gradients([](const std::vector<Tensor>& in) { return matmul(in[0], in[1]); }, {m, n}, rng) < 1e-5);
    CHECK(check_gradients([](const std::vector<Tensor>& in) { return transpose(in[0]); }, {m}, rng) < 1e-5);

    Tensor bias = random_tensor(rng, {4});
    CHECK(check_gradients([](const std::vector<Tensor>& in) { return add_rowvec(in[0], in[1]); }, {a, bias}, rng) < 1e-5);
  }
}

TEST_CASE("matmul gradient wrt A equals G * B^T") {
  Rng rng(11);
  Tensor a = random_tensor(rng, {2, 3});
  Tensor b = random_tensor(rng, {3, 2});
  Tensor g = random_tensor(rng, {2, 2});
  g.set_requires_grad(false);

  Tape tape;
  {
    TapeScope scope(tape);
    Tensor out = matmul(a, b);
    backward(tape, g);
  }
  RowMatrix expect = g.mat() * b.mat().transpose();
  CHECK((a.grad_mat() - expect).cwiseAbs().maxCoeff() < 1e-12);

  // and against the numeric oracle
  auto f = [&](const Tensor& x) {
    TapeScope off;
    return (matmul(x.detach(), b.detach()).array() * g.array()).sum();
  };
  Tensor numeric = finite_difference_grad(f, a, 1e-6);
  CHECK(max_relative_error(a.grad_tensor(), numeric) < 1e-5);
}

TEST_CASE("shape op gradients") {
  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    Tensor a = random_tensor(rng, {4, 3});
    Tensor b = random_tensor(rng, {2, 3});
    CHECK(check_gradients([](const std::vector<Tensor>& in) { return concat_rows({in[0], in[1]}); }, {a, b}, rng) < 1e-5);
    CHECK(check_gradients([](const std::vector<Tensor>& in) { return gather_rows(in[0], {3, 0, 0, 2}); }, {a}, rng) < 1e-5);

    Tensor row = random_tensor(rng, {1, 5});
    CHECK(check_gradients([](const std::vector<Tensor>& in) { return repeat_row(in[0], 4); }, {row}, rng) < 1e-5);
    CHECK(check_gradients([](const std::vector<Tensor>& in) { return reshape(in[0], {3, 4}); }, {a}, rng) < 1e-5);
    CHECK(check_gradients([](const std::vector<Tensor>& in) { return group_mean_rows(in[0], 2); }, {a}, rng) < 1e-5);
  }
}

TEST_CASE("normalization and activation gradients") {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    Tensor x = random_tensor(rng, {5, 6});
    Tensor gamma = random_tensor(rng, {6}, 0.5, 1.5);
    Tensor beta = random_tensor(rng, {6});
    CHECK(check_gradients([](const std::vector<Tensor>& in) { return layer_norm(in[0], in[1], in[2], 1e-5); },
                          {x, gamma, beta}, rng) < 1e-5);

    CHECK(check_gradients([](const std::vector<Tensor>& in) { return softmax_rows(in[0]); }, {x}, rng) < 1e-5);
    CHECK(check_gradients([](const std::vector<Tensor>& in) { return gelu(in[0]); }, {x}, rng) < 1e-5);
    CHECK(check_gradients([](const std::vector<Tensor>& in) { return l2_normalize_rows(in[0]); }, {x}, rng) < 1e-5);

    // keep relu inputs away from the kink
    Tensor xr = random_tensor(rng, {5, 6});
    for (std::size_t i = 0; i < xr.size(); ++i)
      if (std::abs(xr.data()[i]) < 1e-3) xr.data()[i] = 0.1;
    CHECK(check_gradients([](const std::vector<Tensor>& in) { return relu(in[0]); }, {xr}, rng) < 1e-5);
  }
}

TEST_CASE("batch norm gradients in both modes") {
  Rng rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    Tensor gamma = random_tensor(rng, {4}, 0.5, 1.5);
    Tensor beta = random_tensor(rng, {4});
    Tensor x = random_tensor(rng, {6, 4});
    for (bool training : {true, false}) {
      auto fn = [training](const std::vector<Tensor>& in) {
        BatchNormState state{Tensor::full({4}, 0.1), Tensor::full({4}, 0.9)};
        return batch_norm(in[0], in[1], in[2], state, 0.1, 1e-5, training);
      };
      CHECK(check_gradients(fn, {x, gamma, beta}, rng) < 1e-5);
    }
  }
}

TEST_CASE("batch norm running statistics update only in training mode") {
  Rng rng(23);
  Tensor x = random_tensor(rng, {8, 3});
  Tensor gamma = Tensor::full({3}, 1.0);
  Tensor beta = Tensor::zeros({3});
  BatchNormState state{Tensor::zeros({3}), Tensor::full({3}, 1.0)};

  batch_norm(x, gamma, beta, state, 0.1, 1e-5, false);
  CHECK(state.running_mean.array().abs().maxCoeff() == 0.0);

  Eigen::RowVectorXd mean = x.mat().colwise().mean();
  Eigen::RowVectorXd var = (x.mat().rowwise() - mean).array().square().colwise().mean();
  batch_norm(x, gamma, beta, state, 0.1, 1e-5, true);
  CHECK((state.running_mean.mat().row(0) - 0.1 * mean).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((state.running_var.mat().row(0) - (0.9 + 0.1 * var.array()).matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("attention gradients vs finite differences") {
  Rng rng(29);
  for (int trial = 0; trial < 6; ++trial) {
    const int batch = 2, heads = 2, tokens = 3, dim = 4;
    Tensor q = random_tensor(rng, {batch * tokens, heads * dim});
    Tensor k = random_tensor(rng, {batch * tokens, heads * dim});
    Tensor v = random_tensor(rng, {batch * tokens, heads * dim});
    CHECK(check_gradients([=](const std::vector<Tensor>& in) { return attention(in[0], in[1], in[2], batch, heads); },
                          {q, k, v}, rng) < 1e-5);
  }
}

TEST_CASE("loss gradients vs finite differences") {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    Tensor logits = random_tensor(rng, {4, 5});
    std::vector<int> targets{1, 0, 4, 2};
    CHECK(check_gradients([&](const std::vector<Tensor>& in) { return cross_entropy_logits(in[0], targets); }, {logits},
                          rng) < 1e-5);

    Tensor p = random_tensor(rng, {3, 4});
    Tensor t = random_tensor(rng, {3, 4});
    CHECK(check_gradients([](const std::vector<Tensor>& in) { return mse_loss(in[0], in[1]); }, {p, t}, rng) < 1e-5);
    CHECK(check_gradients([](const std::vector<Tensor>& in) { return sum_all(in[0]); }, {p}, rng) < 1e-5);
    CHECK(check_gradients([](const std::vector<Tensor>& in) { return mean_all(in[0]); }, {p}, rng) < 1e-5);
  }
}

TEST_CASE("l1 loss gradient away from ties") {
  Rng rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    Tensor p = random_tensor(rng, {3, 4});
    Tensor t = random_tensor(rng, {3, 4});
    for (std::size_t i = 0; i < p.size(); ++i)
      if (std::abs(p.data()[i] - t.data()[i]) < 1e-2) p.data()[i] += 0.05;
    CHECK(check_gradients([](const std::vector<Tensor>& in) { return l1_loss(in[0], in[1]); }, {p, t}, rng) < 1e-5);
  }
}

TEST_CASE("trivial primitive identities") {
  // matmul against the identity
  Tensor a = Tensor::from({2, 2}, {1, 2, 3, 4});
  Tensor eye = Tensor::from({2, 2}, {1, 0, 0, 1});
  Tensor out = matmul(a, eye);
  CHECK((out.mat() - a.mat()).cwiseAbs().maxCoeff() == 0.0);

  // softmax of equal logits
  Tensor s = softmax_rows(Tensor::from({1, 2}, {0, 0}));
  CHECK(s.value_at(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s.value_at(1) == doctest::Approx(0.5).epsilon(1e-15));

  // layer norm of a constant row is zero before the affine part
  Tensor c = Tensor::full({1, 8}, 3.25);
  Tensor ln = layer_norm(c, Tensor::full({8}, 1.0), Tensor::zeros({8}), 1e-5);
  CHECK(ln.array().abs().maxCoeff() < 1e-9);
}

TEST_CASE("backward: simple analytic cases") {
  // f(x) = x*x at x=3 -> 6
  Tensor x = Tensor::scalar(3.0);
  x.set_requires_grad(true);
  Tape tape;
  {
    TapeScope scope(tape);
    Tensor y = mul(x, x);
    backward(tape, Tensor::scalar(1.0));
    (void)y;
  }
  CHECK(x.grad()(0) == doctest::Approx(6.0).epsilon(1e-15));

  // f(x) = sum(x) -> ones
  Tensor v = Tensor::from({4}, {1, 2, 3, 4});
  v.set_requires_grad(true);
  Tape tape2;
  {
    TapeScope scope(tape2);
    sum_all(v);
    backward(tape2, Tensor::scalar(1.0));
  }
  for (int i = 0; i < 4; ++i) CHECK(v.grad()(i) == 1.0);
}

TEST_CASE("gradient accumulation is additive over shared leaves") {
  Tensor x = Tensor::from({2}, {1.0, 2.0});
  x.set_requires_grad(true);
  Tape tape;
  {
    TapeScope scope(tape);
    Tensor y = add(mul(x, x), scale(x, 3.0));  // x^2 + 3x -> 2x + 3
    backward(tape, Tensor::from({2}, {1.0, 1.0}));
    (void)y;
  }
  CHECK(x.grad()(0) == doctest::Approx(5.0));
  CHECK(x.grad()(1) == doctest::Approx(7.0));
}

TEST_CASE("unused leaves keep zero gradients") {
  Tensor used = Tensor::scalar(2.0);
  Tensor unused = Tensor::scalar(5.0);
  used.set_requires_grad(true);
  unused.set_requires_grad(true);
  Tape tape;
  {
    TapeScope scope(tape);
    mul(used, used);
    backward(tape, Tensor::scalar(1.0));
  }
  CHECK(unused.grad_tensor().value_at(0) == 0.0);
}

TEST_CASE("backward error paths") {
  Tape empty;
  CHECK_THROWS_AS(backward(empty, Tensor::scalar(1.0)), std::runtime_error);

  Tensor x = Tensor::scalar(1.0);
  x.set_requires_grad(true);
  Tape tape;
  {
    TapeScope scope(tape);
    mul(x, x);
  }
  CHECK_THROWS_AS(backward(tape, Tensor::zeros({3})), std::runtime_error);
}

TEST_CASE("shape errors name the offending primitive") {
  Tensor a = Tensor::zeros({2, 3});
  Tensor b = Tensor::zeros({3, 3});
  CHECK_THROWS_WITH_AS(add(a, b), doctest::Contains("add"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(matmul(a, a), doctest::Contains("matmul"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(gather_rows(a, {7}), doctest::Contains("gather_rows"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(attention(a, a, a, 4, 1), doctest::Contains("attention"), std::invalid_argument);
}

TEST_CASE("evaluate is pure and rejects non-finite inputs") {
  Rng rng(41);
  Tensor a = random_tensor(rng, {3, 3});
  a.set_requires_grad(false);
  Graph graph = [](const std::vector<Tensor>& in) {
    return std::vector<Tensor>{gelu(matmul(in[0], in[0]))};
  };
  std::vector<Tensor> r1 = evaluate(graph, {a});
  std::vector<Tensor> r2 = evaluate(graph, {a});
  CHECK(content_hash(r1[0]) == content_hash(r2[0]));

  Tensor bad = a.clone();
  bad.data()[4] = std::nan("");
  CHECK_THROWS_AS(evaluate(graph, {bad}), std::invalid_argument);
}

TEST_CASE("evaluate populates the tape only when inputs require grad") {
  Tensor a = Tensor::from({2, 2}, {1, 2, 3, 4});
  Graph graph = [](const std::vector<Tensor>& in) { return std::vector<Tensor>{mul(in[0], in[0])}; };

  Tape tape;
  evaluate(graph, {a}, &tape);
  CHECK(tape.empty());

  a.set_requires_grad(true);
  evaluate(graph, {a}, &tape);
  CHECK(tape.size() == 1);
  CHECK(std::string(tape[0].op) == "mul");
}

TEST_CASE("finite difference oracle basics") {
  Tensor x = Tensor::scalar(3.0);
  auto f = [](const Tensor& t) { return t.value_at(0) * t.value_at(0); };
  Tensor g = finite_difference_grad(f, x, 1e-6);
  CHECK(g.value_at(0) == doctest::Approx(6.0).epsilon(1e-6));

  auto constant = [](const Tensor&) { return 4.2; };
  Tensor gc = finite_difference_grad(constant, Tensor::zeros({5}), 1e-6);
  CHECK(gc.array().abs().maxCoeff() == 0.0);

  auto blowup = [](const Tensor& t) { return 1.0 / (t.value_at(0) - t.value_at(0)); };
  CHECK_THROWS_AS(finite_difference_grad(blowup, Tensor::zeros({2}), 1e-6), std::runtime_error);
}
