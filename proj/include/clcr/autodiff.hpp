// Copyright 2026 The CLCR Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CLCR_AUTODIFF_HPP_
#define CLCR_AUTODIFF_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace clcr::ad {

/// Dense row-major trainable tensor with its gradient buffer.
struct Tensor {
  std::size_t rows = 0;
  std::size_t cols = 1;
  std::vector<double> value;
  std::vector<double> grad;

  Tensor() = default;
  Tensor(std::size_t r, std::size_t c) : rows(r), cols(c), value(r * c, 0.0), grad(r * c, 0.0) {}

  std::size_t size() const { return value.size(); }
  void ZeroGrad() { std::fill(grad.begin(), grad.end(), 0.0); }
};

struct Var {
  std::size_t id = 0;
};

/// Reverse-mode tape over dense vectors. Build a graph with the op methods,
/// then call Backward on a scalar node. Parameter leaves accumulate their
/// gradients straight into Tensor::grad, so one tape per example can be
/// summed into a mini-batch gradient.
class Tape {
 public:
  /// Constant input; gradients are not propagated into it.
  Var Constant(std::vector<double> value);
  /// Trainable leaf bound to `t`; `t` must outlive the tape.
  Var Param(Tensor& t);
  /// Read-only view of `t`, treated as a constant.
  Var Frozen(const Tensor& t);

  /// W (rows x cols, row-major) times x.
  Var MatVec(Var w, std::size_t rows, std::size_t cols, Var x);
  Var Add(Var a, Var b);
  Var Mul(Var a, Var b);  // elementwise
  Var Tanh(Var a);
  Var Sigmoid(Var a);
  Var Concat(Var a, Var b);
  Var Slice(Var a, std::size_t offset, std::size_t length);
  Var Dot(Var a, Var b);              // scalar
  Var Stack(std::span<const Var> scalars);
  Var Scale(Var a, double c);
  Var Sum(std::span<const Var> scalars);  // scalar
  Var Pick(Var a, std::size_t index);     // scalar
  /// log softmax over entries with masked[i] == false. Masked entries come
  /// out as -inf and receive no gradient.
  Var MaskedLogSoftmax(Var logits, const std::vector<bool>& masked);

  std::span<const double> value(Var v) const;
  double scalar(Var v) const { return value(v)[0]; }
  std::size_t size(Var v) const;
  std::size_t num_nodes() const { return nodes_.size(); }

  /// Seeds d(out)/d(out) = `seed` and propagates to every parameter leaf.
  void Backward(Var out, double seed = 1.0);

 private:
  enum class Op { kConstant, kParam, kMatVec, kAdd, kMul, kTanh, kSigmoid, kConcat, kSlice,
                  kDot, kStack, kScale, kSum, kPick, kLogSoftmax };

  struct Node {
    Op op;
    std::size_t a = 0, b = 0;
    std::size_t p0 = 0, p1 = 0;  // op parameters (shape, offset, index)
    double scale = 0.0;
    std::vector<std::size_t> inputs;  // Stack / Sum
    std::vector<bool> mask;           // log softmax
    std::vector<double> own;          // value storage unless a param
    const double* ext_value = nullptr;
    double* ext_grad = nullptr;
    std::size_t length = 0;
    std::vector<double> grad;

    const double* v() const { return ext_value ? ext_value : own.data(); }
  };

  Var Push(Node node);
  double* GradOf(std::size_t id);

  std::vector<Node> nodes_;
};

}  // namespace clcr::ad

#endif  // CLCR_AUTODIFF_HPP_
