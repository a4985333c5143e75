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

#include "clcr/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "clcr/common.hpp"

namespace clcr::ad {
namespace {

double SigmoidValue(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Var Tape::Push(Node node) {
  if (!node.ext_value) node.length = node.own.size();
  nodes_.push_back(std::move(node));
  return Var{nodes_.size() - 1};
}

double* Tape::GradOf(std::size_t id) {
  Node& n = nodes_[id];
  if (n.op == Op::kConstant) return nullptr;
  if (n.ext_grad) return n.ext_grad;
  if (n.grad.empty()) n.grad.assign(n.length, 0.0);
  return n.grad.data();
}

std::span<const double> Tape::value(Var v) const {
  const Node& n = nodes_[v.id];
  return {n.v(), n.length};
}

std::size_t Tape::size(Var v) const { return nodes_[v.id].length; }

Var Tape::Constant(std::vector<double> value) {
  Node n{Op::kConstant};
  n.own = std::move(value);
  return Push(std::move(n));
}

Var Tape::Param(Tensor& t) {
  Node n{Op::kParam};
  n.ext_value = t.value.data();
  n.ext_grad = t.grad.data();
  n.length = t.value.size();
  return Push(std::move(n));
}

Var Tape::Frozen(const Tensor& t) {
  Node n{Op::kConstant};
  n.ext_value = t.value.data();
  n.length = t.value.size();
  return Push(std::move(n));
}

Var Tape::MatVec(Var w, std::size_t rows, std::size_t cols, Var x) {
  if (size(w) != rows * cols || size(x) != cols) throw Error("MatVec shape mismatch");
  Node n{Op::kMatVec, w.id, x.id, rows, cols};
  n.own.assign(rows, 0.0);
  const double* W = nodes_[w.id].v();
  const double* X = nodes_[x.id].v();
  for (std::size_t r = 0; r < rows; ++r) {
    const double* wr = W + r * cols;
    double s = 0.0;
    for (std::size_t c = 0; c < cols; ++c) s += wr[c] * X[c];
    n.own[r] = s;
  }
  return Push(std::move(n));
}

Var Tape::Add(Var a, Var b) {
  if (size(a) != size(b)) throw Error("Add shape mismatch");
  Node n{Op::kAdd, a.id, b.id};
  const double* A = nodes_[a.id].v();
  const double* B = nodes_[b.id].v();
  n.own.resize(size(a));
  for (std::size_t i = 0; i < n.own.size(); ++i) n.own[i] = A[i] + B[i];
  return Push(std::move(n));
}

Var Tape::Mul(Var a, Var b) {
  if (size(a) != size(b)) throw Error("Mul shape mismatch");
  Node n{Op::kMul, a.id, b.id};
  const double* A = nodes_[a.id].v();
  const double* B = nodes_[b.id].v();
  n.own.resize(size(a));
  for (std::size_t i = 0; i < n.own.size(); ++i) n.own[i] = A[i] * B[i];
  return Push(std::move(n));
}

Var Tape::Tanh(Var a) {
  Node n{Op::kTanh, a.id};
  const double* A = nodes_[a.id].v();
  n.own.resize(size(a));
  for (std::size_t i = 0; i < n.own.size(); ++i) n.own[i] = std::tanh(A[i]);
  return Push(std::move(n));
}

Var Tape::Sigmoid(Var a) {
  Node n{Op::kSigmoid, a.id};
  const double* A = nodes_[a.id].v();
  n.own.resize(size(a));
  for (std::size_t i = 0; i < n.own.size(); ++i) n.own[i] = SigmoidValue(A[i]);
  return Push(std::move(n));
}

Var Tape::Concat(Var a, Var b) {
  Node n{Op::kConcat, a.id, b.id};
  auto va = value(a);
  auto vb = value(b);
  n.own.assign(va.begin(), va.end());
  n.own.insert(n.own.end(), vb.begin(), vb.end());
  return Push(std::move(n));
}

Var Tape::Slice(Var a, std::size_t offset, std::size_t length) {
  if (offset + length > size(a)) throw Error("Slice out of range");
  Node n{Op::kSlice, a.id, 0, offset};
  const double* A = nodes_[a.id].v();
  n.own.assign(A + offset, A + offset + length);
  return Push(std::move(n));
}

Var Tape::Dot(Var a, Var b) {
  if (size(a) != size(b)) throw Error("Dot shape mismatch");
  Node n{Op::kDot, a.id, b.id};
  const double* A = nodes_[a.id].v();
  const double* B = nodes_[b.id].v();
  double s = 0.0;
  for (std::size_t i = 0; i < size(a); ++i) s += A[i] * B[i];
  n.own = {s};
  return Push(std::move(n));
}

Var Tape::Stack(std::span<const Var> scalars) {
  Node n{Op::kStack};
  for (Var s : scalars) {
    if (size(s) != 1) throw Error("Stack expects scalars");
    n.inputs.push_back(s.id);
    n.own.push_back(scalar(s));
  }
  return Push(std::move(n));
}

Var Tape::Scale(Var a, double c) {
  Node n{Op::kScale, a.id};
  n.scale = c;
  const double* A = nodes_[a.id].v();
  n.own.resize(size(a));
  for (std::size_t i = 0; i < n.own.size(); ++i) n.own[i] = c * A[i];
  return Push(std::move(n));
}

Var Tape::Sum(std::span<const Var> scalars) {
  Node n{Op::kSum};
  double s = 0.0;
  for (Var v : scalars) {
    if (size(v) != 1) throw Error("Sum expects scalars");
    n.inputs.push_back(v.id);
    s += scalar(v);
  }
  n.own = {s};
  return Push(std::move(n));
}

Var Tape::Pick(Var a, std::size_t index) {
  if (index >= size(a)) throw Error("Pick out of range");
  Node n{Op::kPick, a.id, 0, index};
  n.own = {nodes_[a.id].v()[index]};
  return Push(std::move(n));
}

Var Tape::MaskedLogSoftmax(Var logits, const std::vector<bool>& masked) {
  const std::size_t len = size(logits);
  if (masked.size() != len) throw Error("mask length mismatch");
  const double* z = nodes_[logits.id].v();
  double mx = -std::numeric_limits<double>::infinity();
  std::size_t open = 0;
  for (std::size_t i = 0; i < len; ++i) {
    if (masked[i]) continue;
    ++open;
    mx = std::isnan(z[i]) ? z[i] : std::max(mx, z[i]);
  }
  if (open == 0) throw Error("log softmax with every entry masked");
  double s = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    if (!masked[i]) s += std::exp(z[i] - mx);
  }
  const double lse = std::log(s);
  Node n{Op::kLogSoftmax, logits.id};
  n.mask = masked;
  n.own.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    n.own[i] = masked[i] ? -std::numeric_limits<double>::infinity() : (z[i] - mx) - lse;
  }
  return Push(std::move(n));
}

void Tape::Backward(Var out, double seed) {
  if (size(out) != 1) throw Error("Backward needs a scalar output");
  GradOf(out.id)[0] += seed;
  for (std::size_t id = out.id + 1; id-- > 0;) {
    Node& n = nodes_[id];
    if (n.op == Op::kConstant || n.op == Op::kParam || n.grad.empty()) continue;
    const double* g = n.grad.data();
    const double* y = n.own.data();
    switch (n.op) {
      case Op::kMatVec: {
        const std::size_t rows = n.p0, cols = n.p1;
        const double* W = nodes_[n.a].v();
        const double* X = nodes_[n.b].v();
        if (double* gw = GradOf(n.a)) {
          for (std::size_t r = 0; r < rows; ++r) {
            const double gr = g[r];
            if (gr == 0.0) continue;
            double* row = gw + r * cols;
            for (std::size_t c = 0; c < cols; ++c) row[c] += gr * X[c];
          }
        }
        if (double* gx = GradOf(n.b)) {
          for (std::size_t r = 0; r < rows; ++r) {
            const double gr = g[r];
            if (gr == 0.0) continue;
            const double* wr = W + r * cols;
            for (std::size_t c = 0; c < cols; ++c) gx[c] += wr[c] * gr;
          }
        }
        break;
      }
      case Op::kAdd: {
        if (double* ga = GradOf(n.a)) {
          for (std::size_t i = 0; i < n.length; ++i) ga[i] += g[i];
        }
        if (double* gb = GradOf(n.b)) {
          for (std::size_t i = 0; i < n.length; ++i) gb[i] += g[i];
        }
        break;
      }
      case Op::kMul: {
        const double* A = nodes_[n.a].v();
        const double* B = nodes_[n.b].v();
        if (double* ga = GradOf(n.a)) {
          for (std::size_t i = 0; i < n.length; ++i) ga[i] += g[i] * B[i];
        }
        if (double* gb = GradOf(n.b)) {
          for (std::size_t i = 0; i < n.length; ++i) gb[i] += g[i] * A[i];
        }
        break;
      }
      case Op::kTanh: {
        if (double* ga = GradOf(n.a)) {
          for (std::size_t i = 0; i < n.length; ++i) ga[i] += g[i] * (1.0 - y[i] * y[i]);
        }
        break;
      }
      case Op::kSigmoid: {
        if (double* ga = GradOf(n.a)) {
          for (std::size_t i = 0; i < n.length; ++i) ga[i] += g[i] * y[i] * (1.0 - y[i]);
        }
        break;
      }
      case Op::kConcat: {
        const std::size_t la = nodes_[n.a].length;
        if (double* ga = GradOf(n.a)) {
          for (std::size_t i = 0; i < la; ++i) ga[i] += g[i];
        }
        if (double* gb = GradOf(n.b)) {
          for (std::size_t i = la; i < n.length; ++i) gb[i - la] += g[i];
        }
        break;
      }
      case Op::kSlice: {
        if (double* ga = GradOf(n.a)) {
          for (std::size_t i = 0; i < n.length; ++i) ga[n.p0 + i] += g[i];
        }
        break;
      }
      case Op::kDot: {
        const double* A = nodes_[n.a].v();
        const double* B = nodes_[n.b].v();
        const std::size_t len = nodes_[n.a].length;
        if (double* ga = GradOf(n.a)) {
          for (std::size_t i = 0; i < len; ++i) ga[i] += g[0] * B[i];
        }
        if (double* gb = GradOf(n.b)) {
          for (std::size_t i = 0; i < len; ++i) gb[i] += g[0] * A[i];
        }
        break;
      }
      case Op::kStack: {
        for (std::size_t i = 0; i < n.inputs.size(); ++i) {
          if (double* gi = GradOf(n.inputs[i])) gi[0] += g[i];
        }
        break;
      }
      case Op::kScale: {
        if (double* ga = GradOf(n.a)) {
          for (std::size_t i = 0; i < n.length; ++i) ga[i] += n.scale * g[i];
        }
        break;
      }
      case Op::kSum: {
        for (std::size_t in : n.inputs) {
          if (double* gi = GradOf(in)) gi[0] += g[0];
        }
        break;
      }
      case Op::kPick: {
        if (double* ga = GradOf(n.a)) ga[n.p0] += g[0];
        break;
      }
      case Op::kLogSoftmax: {
        double gsum = 0.0;
        for (std::size_t i = 0; i < n.length; ++i) {
          if (!n.mask[i]) gsum += g[i];
        }
        if (double* ga = GradOf(n.a)) {
          for (std::size_t i = 0; i < n.length; ++i) {
            if (!n.mask[i]) ga[i] += g[i] - std::exp(y[i]) * gsum;
          }
        }
        break;
      }
      case Op::kConstant:
      case Op::kParam:
        break;
    }
  }
}

}  // namespace clcr::ad
