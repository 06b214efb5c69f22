// Copyright (c) 2026 the maect authors
// SPDX-License-Identifier: Apache-2.0
//
// Reverse-mode tape: ordered record of primitive applications and the
// backward sweep over them.

#pragma once

#include "maect/tensor.hpp"

#include <functional>
#include <vector>

namespace maect {

/// One recorded primitive application. Records are appended in execution
/// order, so every input of a record was produced (or existed) before it.
/// Saved values needed by the backward rule are captured inside `backward`.
struct TapeRecord {
  const char* op = "";
  std::vector<Tensor> inputs;
  Tensor output;
  std::function<void()> backward;  // reads output grad, accumulates into input grads
};

class Tape {
 public:
  void record(TapeRecord rec) { records_.push_back(std::move(rec)); }
  bool empty() const { return records_.empty(); }
  std::size_t size() const { return records_.size(); }
  const TapeRecord& operator[](std::size_t i) const { return records_[i]; }
  const TapeRecord& back() const { return records_.back(); }
  void clear() { records_.clear(); }

 private:
  std::vector<TapeRecord> records_;
};

/// Innermost active tape of this thread, or nullptr when recording is off.
Tape* active_tape();

/// Activates a tape for the current scope. Scopes nest; independent tapes on
/// different threads never share state.
class TapeScope {
 public:
  explicit TapeScope(Tape& tape);
  /// Suspends recording entirely for the scope.
  TapeScope();
  ~TapeScope();
  TapeScope(const TapeScope&) = delete;
  TapeScope& operator=(const TapeScope&) = delete;

 private:
  Tape* prev_;
};

/// Seeds the final record's output with `seed` and walks the tape backward,
/// visiting each record exactly once. Every requires_grad leaf on the path
/// receives its accumulated gradient; untouched leaves keep a zero gradient.
void backward(Tape& tape, const Tensor& seed);

/// Convenience for scalar outputs: backward with seed 1.
void backward(Tape& tape);

}  // namespace maect
