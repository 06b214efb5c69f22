// Copyright (c) 2026 the maect authors
// SPDX-License-Identifier: Apache-2.0

#include "maect/tape.hpp"

namespace maect {

namespace {
thread_local Tape* g_active_tape = nullptr;
}

Tape* active_tape() { return g_active_tape; }

TapeScope::TapeScope(Tape& tape) : prev_(g_active_tape) { g_active_tape = &tape; }
TapeScope::TapeScope() : prev_(g_active_tape) { g_active_tape = nullptr; }
TapeScope::~TapeScope() { g_active_tape = prev_; }

void backward(Tape& tape, const Tensor& seed) {
  if (tape.empty()) throw std::runtime_error("backward: empty tape");
  Tensor out = tape.back().output;
  if (seed.shape() != out.shape())
    throw std::runtime_error("backward: seed shape " + shape_str(seed.shape()) +
                             " does not match output shape " + shape_str(out.shape()));
  out.accumulate_grad(seed.array());
  for (std::size_t i = tape.size(); i-- > 0;) {
    const TapeRecord& rec = tape[i];
    // Outputs never reached by the seed carry no gradient; skip their rule.
    if (!rec.output.has_grad()) continue;
    rec.backward();
  }
}

void backward(Tape& tape) {
  if (tape.empty()) throw std::runtime_error("backward: empty tape");
  Tensor seed(tape.back().output.shape());
  seed.array().setOnes();
  backward(tape, seed);
}

}  // namespace maect
