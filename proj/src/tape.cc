// src/tape.cc
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "antispoof/tape.hpp"

#include <cmath>

namespace antispoof::nn {

namespace {

double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double stable_softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

void require(bool ok, const char* what) {
  if (!ok) raise(ErrorCode::ShapeMismatch, what);
}

}  // namespace

VarId Tape::push(Node node) {
  nodes_.push_back(std::move(node));
  return static_cast<VarId>(nodes_.size()) - 1;
}

VarId Tape::input(Mat value) {
  Node n;
  n.op = Op::Input;
  n.value = std::move(value);
  n.needs_grad = true;
  return push(std::move(n));
}

VarId Tape::constant(Mat value) {
  Node n;
  n.op = Op::Constant;
  n.value = std::move(value);
  n.needs_grad = false;
  return push(std::move(n));
}

VarId Tape::matmul(VarId a, VarId b) {
  Node n;
  n.op = Op::MatMul;
  n.a = a;
  n.b = b;
  n.value = antispoof::matmul(at(a).value, at(b).value);
  n.needs_grad = at(a).needs_grad || at(b).needs_grad;
  return push(std::move(n));
}

VarId Tape::transpose(VarId a) {
  Node n;
  n.op = Op::Transpose;
  n.a = a;
  n.value = antispoof::transpose(at(a).value);
  n.needs_grad = at(a).needs_grad;
  return push(std::move(n));
}

VarId Tape::add(VarId a, VarId b) {
  require(at(a).value.same_shape(at(b).value), "add shape mismatch");
  Node n;
  n.op = Op::Add;
  n.a = a;
  n.b = b;
  n.value = at(a).value;
  for (std::size_t i = 0; i < n.value.size(); ++i) n.value.data()[i] += at(b).value.data()[i];
  n.needs_grad = at(a).needs_grad || at(b).needs_grad;
  return push(std::move(n));
}

VarId Tape::sub(VarId a, VarId b) {
  require(at(a).value.same_shape(at(b).value), "sub shape mismatch");
  Node n;
  n.op = Op::Sub;
  n.a = a;
  n.b = b;
  n.value = at(a).value;
  for (std::size_t i = 0; i < n.value.size(); ++i) n.value.data()[i] -= at(b).value.data()[i];
  n.needs_grad = at(a).needs_grad || at(b).needs_grad;
  return push(std::move(n));
}

VarId Tape::mul(VarId a, VarId b) {
  require(at(a).value.same_shape(at(b).value), "mul shape mismatch");
  Node n;
  n.op = Op::Mul;
  n.a = a;
  n.b = b;
  n.value = at(a).value;
  for (std::size_t i = 0; i < n.value.size(); ++i) n.value.data()[i] *= at(b).value.data()[i];
  n.needs_grad = at(a).needs_grad || at(b).needs_grad;
  return push(std::move(n));
}

VarId Tape::scale(VarId a, double s) { return affine(a, s, 0.0); }

VarId Tape::affine(VarId a, double m, double c) {
  Node n;
  n.op = Op::Affine;
  n.a = a;
  n.p0 = m;
  n.value = at(a).value;
  for (std::size_t i = 0; i < n.value.size(); ++i) {
    n.value.data()[i] = m * n.value.data()[i] + c;
  }
  n.needs_grad = at(a).needs_grad;
  return push(std::move(n));
}

VarId Tape::add_rowvec(VarId a, VarId v) {
  require(at(v).value.rows() == 1 && at(v).value.cols() == at(a).value.cols(),
          "add_rowvec shape mismatch");
  Node n;
  n.op = Op::AddRowVec;
  n.a = a;
  n.b = v;
  n.value = at(a).value;
  const Mat& bias = at(v).value;
  for (int r = 0; r < n.value.rows(); ++r) {
    for (int c = 0; c < n.value.cols(); ++c) n.value(r, c) += bias(0, c);
  }
  n.needs_grad = at(a).needs_grad || at(v).needs_grad;
  return push(std::move(n));
}

#define ANTISPOOF_ELEMENTWISE(NAME, OPK, EXPR)                    \
  VarId Tape::NAME(VarId a) {                                     \
    Node n;                                                       \
    n.op = Op::OPK;                                               \
    n.a = a;                                                      \
    n.value = at(a).value;                                        \
    for (std::size_t i = 0; i < n.value.size(); ++i) {            \
      const double x = n.value.data()[i];                         \
      n.value.data()[i] = (EXPR);                                 \
    }                                                             \
    n.needs_grad = at(a).needs_grad;                              \
    return push(std::move(n));                                    \
  }

ANTISPOOF_ELEMENTWISE(tanh, Tanh, std::tanh(x))
ANTISPOOF_ELEMENTWISE(sigmoid, Sigmoid, stable_sigmoid(x))
ANTISPOOF_ELEMENTWISE(softplus, Softplus, stable_softplus(x))
ANTISPOOF_ELEMENTWISE(square, Square, x* x)
ANTISPOOF_ELEMENTWISE(cos, Cos, std::cos(x))

#undef ANTISPOOF_ELEMENTWISE

VarId Tape::leaky_relu(VarId a, double slope) {
  Node n;
  n.op = Op::LeakyRelu;
  n.a = a;
  n.p0 = slope;
  n.value = at(a).value;
  for (std::size_t i = 0; i < n.value.size(); ++i) {
    const double x = n.value.data()[i];
    n.value.data()[i] = x > 0.0 ? x : slope * x;
  }
  n.needs_grad = at(a).needs_grad;
  return push(std::move(n));
}

VarId Tape::acos_clamped(VarId a, double eps) {
  Node n;
  n.op = Op::AcosClamped;
  n.a = a;
  n.p0 = eps;
  n.value = at(a).value;
  for (std::size_t i = 0; i < n.value.size(); ++i) {
    const double x = n.value.data()[i];
    const double c = std::min(1.0 - eps, std::max(-(1.0 - eps), x));
    n.value.data()[i] = std::acos(c);
  }
  n.needs_grad = at(a).needs_grad;
  return push(std::move(n));
}

VarId Tape::sum(VarId a) {
  Node n;
  n.op = Op::Sum;
  n.a = a;
  n.value = Mat(1, 1);
  double acc = 0.0;
  for (std::size_t i = 0; i < at(a).value.size(); ++i) acc += at(a).value.data()[i];
  n.value(0, 0) = acc;
  n.needs_grad = at(a).needs_grad;
  return push(std::move(n));
}

VarId Tape::mean_rows(VarId a) {
  const Mat& x = at(a).value;
  require(x.rows() >= 1, "mean_rows of empty matrix");
  Node n;
  n.op = Op::MeanRows;
  n.a = a;
  n.value = Mat(1, x.cols());
  for (int c = 0; c < x.cols(); ++c) {
    double acc = 0.0;
    for (int r = 0; r < x.rows(); ++r) acc += x(r, c);
    n.value(0, c) = acc / x.rows();
  }
  n.needs_grad = at(a).needs_grad;
  return push(std::move(n));
}

VarId Tape::softmax_col(VarId a) {
  const Mat& x = at(a).value;
  require(x.cols() == 1, "softmax_col expects a column");
  Node n;
  n.op = Op::SoftmaxCol;
  n.a = a;
  n.value = Mat(x.rows(), 1);
  double mx = x(0, 0);
  for (int r = 1; r < x.rows(); ++r) mx = std::max(mx, x(r, 0));
  double z = 0.0;
  for (int r = 0; r < x.rows(); ++r) z += std::exp(x(r, 0) - mx);
  for (int r = 0; r < x.rows(); ++r) n.value(r, 0) = std::exp(x(r, 0) - mx) / z;
  n.needs_grad = at(a).needs_grad;
  return push(std::move(n));
}

VarId Tape::log_softmax_row(VarId a) {
  const Mat& x = at(a).value;
  require(x.rows() == 1, "log_softmax_row expects a row");
  Node n;
  n.op = Op::LogSoftmaxRow;
  n.a = a;
  n.value = Mat(1, x.cols());
  double mx = x(0, 0);
  for (int c = 1; c < x.cols(); ++c) mx = std::max(mx, x(0, c));
  double z = 0.0;
  for (int c = 0; c < x.cols(); ++c) z += std::exp(x(0, c) - mx);
  const double lse = mx + std::log(z);
  for (int c = 0; c < x.cols(); ++c) n.value(0, c) = x(0, c) - lse;
  n.needs_grad = at(a).needs_grad;
  return push(std::move(n));
}

VarId Tape::pick(VarId a, int r, int c) {
  Node n;
  n.op = Op::Pick;
  n.a = a;
  n.i0 = r;
  n.i1 = c;
  n.value = Mat(1, 1);
  n.value(0, 0) = at(a).value(r, c);
  n.needs_grad = at(a).needs_grad;
  return push(std::move(n));
}

VarId Tape::concat_cols(VarId a, VarId b) {
  const Mat& x = at(a).value;
  const Mat& y = at(b).value;
  require(x.rows() == y.rows(), "concat_cols row mismatch");
  Node n;
  n.op = Op::ConcatCols;
  n.a = a;
  n.b = b;
  n.value = Mat(x.rows(), x.cols() + y.cols());
  for (int r = 0; r < x.rows(); ++r) {
    for (int c = 0; c < x.cols(); ++c) n.value(r, c) = x(r, c);
    for (int c = 0; c < y.cols(); ++c) n.value(r, x.cols() + c) = y(r, c);
  }
  n.needs_grad = at(a).needs_grad || at(b).needs_grad;
  return push(std::move(n));
}

VarId Tape::concat_rows(const std::vector<VarId>& parts) {
  require(!parts.empty(), "concat_rows of nothing");
  const int cols = at(parts[0]).value.cols();
  int rows = 0;
  bool needs = false;
  for (VarId id : parts) {
    require(at(id).value.cols() == cols, "concat_rows column mismatch");
    rows += at(id).value.rows();
    needs = needs || at(id).needs_grad;
  }
  Node n;
  n.op = Op::ConcatRows;
  n.parts = parts;
  n.value = Mat(rows, cols);
  int r0 = 0;
  for (VarId id : parts) {
    const Mat& x = at(id).value;
    for (int r = 0; r < x.rows(); ++r) {
      for (int c = 0; c < cols; ++c) n.value(r0 + r, c) = x(r, c);
    }
    r0 += x.rows();
  }
  n.needs_grad = needs;
  return push(std::move(n));
}

VarId Tape::slice_cols(VarId a, int lo, int hi) {
  const Mat& x = at(a).value;
  require(0 <= lo && lo < hi && hi <= x.cols(), "slice_cols out of range");
  Node n;
  n.op = Op::SliceCols;
  n.a = a;
  n.i0 = lo;
  n.i1 = hi;
  n.value = Mat(x.rows(), hi - lo);
  for (int r = 0; r < x.rows(); ++r) {
    for (int c = lo; c < hi; ++c) n.value(r, c - lo) = x(r, c);
  }
  n.needs_grad = at(a).needs_grad;
  return push(std::move(n));
}

VarId Tape::row(VarId a, int r) {
  const Mat& x = at(a).value;
  require(0 <= r && r < x.rows(), "row index out of range");
  Node n;
  n.op = Op::Row;
  n.a = a;
  n.i0 = r;
  n.value = Mat(1, x.cols());
  for (int c = 0; c < x.cols(); ++c) n.value(0, c) = x(r, c);
  n.needs_grad = at(a).needs_grad;
  return push(std::move(n));
}

VarId Tape::reverse_rows(VarId a) {
  const Mat& x = at(a).value;
  Node n;
  n.op = Op::ReverseRows;
  n.a = a;
  n.value = Mat(x.rows(), x.cols());
  for (int r = 0; r < x.rows(); ++r) {
    for (int c = 0; c < x.cols(); ++c) n.value(r, c) = x(x.rows() - 1 - r, c);
  }
  n.needs_grad = at(a).needs_grad;
  return push(std::move(n));
}

VarId Tape::flatten_to_row(VarId a) {
  const Mat& x = at(a).value;
  Node n;
  n.op = Op::Flatten;
  n.a = a;
  n.value = Mat(1, static_cast<int>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) n.value.data()[i] = x.data()[i];
  n.needs_grad = at(a).needs_grad;
  return push(std::move(n));
}

VarId Tape::im2col(VarId a, int kernel_size, int stride) {
  const Mat& x = at(a).value;
  require(kernel_size >= 1 && kernel_size % 2 == 1, "kernel size must be odd");
  require(stride >= 1, "stride must be positive");
  require(x.rows() >= 1, "im2col of empty sequence");
  const int pad = (kernel_size - 1) / 2;
  const int out_rows = (x.rows() + 2 * pad - kernel_size) / stride + 1;
  Node n;
  n.op = Op::Im2Col;
  n.a = a;
  n.i0 = kernel_size;
  n.i1 = stride;
  n.value = Mat(out_rows, kernel_size * x.cols());
  for (int m = 0; m < out_rows; ++m) {
    for (int t = 0; t < kernel_size; ++t) {
      const int r = m * stride - pad + t;
      if (r < 0 || r >= x.rows()) continue;  // zero padding
      for (int c = 0; c < x.cols(); ++c) n.value(m, t * x.cols() + c) = x(r, c);
    }
  }
  n.needs_grad = at(a).needs_grad;
  return push(std::move(n));
}

VarId Tape::normalize_rows(VarId a) {
  const Mat& x = at(a).value;
  Node n;
  n.op = Op::NormalizeRows;
  n.a = a;
  n.value = Mat(x.rows(), x.cols());
  for (int r = 0; r < x.rows(); ++r) {
    double sq = 0.0;
    for (int c = 0; c < x.cols(); ++c) sq += x(r, c) * x(r, c);
    const double norm = std::sqrt(sq);
    if (norm == 0.0) raise(ErrorCode::ZeroVector, "cannot normalize a zero row");
    for (int c = 0; c < x.cols(); ++c) n.value(r, c) = x(r, c) / norm;
  }
  n.needs_grad = at(a).needs_grad;
  return push(std::move(n));
}

Mat& Tape::grad_buffer(VarId id) {
  Node& n = at(id);
  if (n.grad.empty() || !n.grad.same_shape(n.value)) {
    n.grad = Mat(n.value.rows(), n.value.cols());
  }
  return n.grad;
}

Mat Tape::grad_of(VarId id) const {
  const Node& n = at(id);
  if (n.grad.same_shape(n.value)) return n.grad;
  return Mat(n.value.rows(), n.value.cols());
}

void Tape::backward(VarId loss) {
  require(at(loss).value.rows() == 1 && at(loss).value.cols() == 1,
          "backward expects a scalar");
  for (Node& n : nodes_) n.grad = Mat();
  grad_buffer(loss)(0, 0) = 1.0;
  for (VarId id = loss; id >= 0; --id) {
    const Node& n = at(id);
    if (!n.needs_grad || n.grad.empty()) continue;
    backprop_node(id);
  }
}

void Tape::backprop_node(VarId id) {
  Node& n = at(id);
  const Mat& g = n.grad;
  auto push_to = [&](VarId parent) -> Mat* {
    if (parent < 0 || !at(parent).needs_grad) return nullptr;
    return &grad_buffer(parent);
  };

  switch (n.op) {
    case Op::Input:
    case Op::Constant:
      return;
    case Op::MatMul: {
      if (Mat* ga = push_to(n.a)) {
        const Mat delta = antispoof::matmul(g, antispoof::transpose(at(n.b).value));
        for (std::size_t i = 0; i < ga->size(); ++i) ga->data()[i] += delta.data()[i];
      }
      if (Mat* gb = push_to(n.b)) {
        const Mat delta = antispoof::matmul(antispoof::transpose(at(n.a).value), g);
        for (std::size_t i = 0; i < gb->size(); ++i) gb->data()[i] += delta.data()[i];
      }
      return;
    }
    case Op::Transpose: {
      if (Mat* ga = push_to(n.a)) {
        for (int r = 0; r < g.rows(); ++r) {
          for (int c = 0; c < g.cols(); ++c) (*ga)(c, r) += g(r, c);
        }
      }
      return;
    }
    case Op::Add: {
      if (Mat* ga = push_to(n.a)) {
        for (std::size_t i = 0; i < g.size(); ++i) ga->data()[i] += g.data()[i];
      }
      if (Mat* gb = push_to(n.b)) {
        for (std::size_t i = 0; i < g.size(); ++i) gb->data()[i] += g.data()[i];
      }
      return;
    }
    case Op::Sub: {
      if (Mat* ga = push_to(n.a)) {
        for (std::size_t i = 0; i < g.size(); ++i) ga->data()[i] += g.data()[i];
      }
      if (Mat* gb = push_to(n.b)) {
        for (std::size_t i = 0; i < g.size(); ++i) gb->data()[i] -= g.data()[i];
      }
      return;
    }
    case Op::Mul: {
      if (Mat* ga = push_to(n.a)) {
        const Mat& bv = at(n.b).value;
        for (std::size_t i = 0; i < g.size(); ++i) ga->data()[i] += g.data()[i] * bv.data()[i];
      }
      if (Mat* gb = push_to(n.b)) {
        const Mat& av = at(n.a).value;
        for (std::size_t i = 0; i < g.size(); ++i) gb->data()[i] += g.data()[i] * av.data()[i];
      }
      return;
    }
    case Op::Affine: {
      if (Mat* ga = push_to(n.a)) {
        for (std::size_t i = 0; i < g.size(); ++i) ga->data()[i] += n.p0 * g.data()[i];
      }
      return;
    }
    case Op::AddRowVec: {
      if (Mat* ga = push_to(n.a)) {
        for (std::size_t i = 0; i < g.size(); ++i) ga->data()[i] += g.data()[i];
      }
      if (Mat* gb = push_to(n.b)) {
        for (int r = 0; r < g.rows(); ++r) {
          for (int c = 0; c < g.cols(); ++c) (*gb)(0, c) += g(r, c);
        }
      }
      return;
    }
    case Op::Tanh: {
      if (Mat* ga = push_to(n.a)) {
        for (std::size_t i = 0; i < g.size(); ++i) {
          const double y = n.value.data()[i];
          ga->data()[i] += g.data()[i] * (1.0 - y * y);
        }
      }
      return;
    }
    case Op::Sigmoid: {
      if (Mat* ga = push_to(n.a)) {
        for (std::size_t i = 0; i < g.size(); ++i) {
          const double y = n.value.data()[i];
          ga->data()[i] += g.data()[i] * y * (1.0 - y);
        }
      }
      return;
    }
    case Op::LeakyRelu: {
      if (Mat* ga = push_to(n.a)) {
        const Mat& x = at(n.a).value;
        for (std::size_t i = 0; i < g.size(); ++i) {
          ga->data()[i] += g.data()[i] * (x.data()[i] > 0.0 ? 1.0 : n.p0);
        }
      }
      return;
    }
    case Op::Softplus: {
      if (Mat* ga = push_to(n.a)) {
        const Mat& x = at(n.a).value;
        for (std::size_t i = 0; i < g.size(); ++i) {
          ga->data()[i] += g.data()[i] * stable_sigmoid(x.data()[i]);
        }
      }
      return;
    }
    case Op::Square: {
      if (Mat* ga = push_to(n.a)) {
        const Mat& x = at(n.a).value;
        for (std::size_t i = 0; i < g.size(); ++i) {
          ga->data()[i] += g.data()[i] * 2.0 * x.data()[i];
        }
      }
      return;
    }
    case Op::AcosClamped: {
      if (Mat* ga = push_to(n.a)) {
        const Mat& x = at(n.a).value;
        const double lim = 1.0 - n.p0;
        for (std::size_t i = 0; i < g.size(); ++i) {
          const double xv = x.data()[i];
          if (xv > -lim && xv < lim) {
            ga->data()[i] += g.data()[i] * (-1.0 / std::sqrt(1.0 - xv * xv));
          }
        }
      }
      return;
    }
    case Op::Cos: {
      if (Mat* ga = push_to(n.a)) {
        const Mat& x = at(n.a).value;
        for (std::size_t i = 0; i < g.size(); ++i) {
          ga->data()[i] += g.data()[i] * (-std::sin(x.data()[i]));
        }
      }
      return;
    }
    case Op::Sum: {
      if (Mat* ga = push_to(n.a)) {
        const double s = g(0, 0);
        for (std::size_t i = 0; i < ga->size(); ++i) ga->data()[i] += s;
      }
      return;
    }
    case Op::MeanRows: {
      if (Mat* ga = push_to(n.a)) {
        const double inv = 1.0 / ga->rows();
        for (int r = 0; r < ga->rows(); ++r) {
          for (int c = 0; c < ga->cols(); ++c) (*ga)(r, c) += g(0, c) * inv;
        }
      }
      return;
    }
    case Op::SoftmaxCol: {
      if (Mat* ga = push_to(n.a)) {
        double dot = 0.0;
        for (int r = 0; r < g.rows(); ++r) dot += g(r, 0) * n.value(r, 0);
        for (int r = 0; r < g.rows(); ++r) {
          (*ga)(r, 0) += n.value(r, 0) * (g(r, 0) - dot);
        }
      }
      return;
    }
    case Op::LogSoftmaxRow: {
      if (Mat* ga = push_to(n.a)) {
        double total = 0.0;
        for (int c = 0; c < g.cols(); ++c) total += g(0, c);
        for (int c = 0; c < g.cols(); ++c) {
          (*ga)(0, c) += g(0, c) - std::exp(n.value(0, c)) * total;
        }
      }
      return;
    }
    case Op::Pick: {
      if (Mat* ga = push_to(n.a)) (*ga)(n.i0, n.i1) += g(0, 0);
      return;
    }
    case Op::ConcatCols: {
      const int ac = at(n.a).value.cols();
      if (Mat* ga = push_to(n.a)) {
        for (int r = 0; r < g.rows(); ++r) {
          for (int c = 0; c < ac; ++c) (*ga)(r, c) += g(r, c);
        }
      }
      if (Mat* gb = push_to(n.b)) {
        for (int r = 0; r < g.rows(); ++r) {
          for (int c = 0; c < gb->cols(); ++c) (*gb)(r, c) += g(r, ac + c);
        }
      }
      return;
    }
    case Op::ConcatRows: {
      int r0 = 0;
      for (VarId part : n.parts) {
        const int rows = at(part).value.rows();
        if (at(part).needs_grad) {
          Mat& gp = grad_buffer(part);
          for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < g.cols(); ++c) gp(r, c) += g(r0 + r, c);
          }
        }
        r0 += rows;
      }
      return;
    }
    case Op::SliceCols: {
      if (Mat* ga = push_to(n.a)) {
        for (int r = 0; r < g.rows(); ++r) {
          for (int c = 0; c < g.cols(); ++c) (*ga)(r, n.i0 + c) += g(r, c);
        }
      }
      return;
    }
    case Op::Row: {
      if (Mat* ga = push_to(n.a)) {
        for (int c = 0; c < g.cols(); ++c) (*ga)(n.i0, c) += g(0, c);
      }
      return;
    }
    case Op::ReverseRows: {
      if (Mat* ga = push_to(n.a)) {
        for (int r = 0; r < g.rows(); ++r) {
          for (int c = 0; c < g.cols(); ++c) (*ga)(g.rows() - 1 - r, c) += g(r, c);
        }
      }
      return;
    }
    case Op::Flatten: {
      if (Mat* ga = push_to(n.a)) {
        for (std::size_t i = 0; i < ga->size(); ++i) ga->data()[i] += g.data()[i];
      }
      return;
    }
    case Op::Im2Col: {
      if (Mat* ga = push_to(n.a)) {
        const int kernel = n.i0;
        const int stride = n.i1;
        const int pad = (kernel - 1) / 2;
        const int cols = ga->cols();
        for (int m = 0; m < g.rows(); ++m) {
          for (int t = 0; t < kernel; ++t) {
            const int r = m * stride - pad + t;
            if (r < 0 || r >= ga->rows()) continue;
            for (int c = 0; c < cols; ++c) (*ga)(r, c) += g(m, t * cols + c);
          }
        }
      }
      return;
    }
    case Op::NormalizeRows: {
      if (Mat* ga = push_to(n.a)) {
        const Mat& x = at(n.a).value;
        for (int r = 0; r < g.rows(); ++r) {
          double sq = 0.0;
          for (int c = 0; c < x.cols(); ++c) sq += x(r, c) * x(r, c);
          const double norm = std::sqrt(sq);
          double dot = 0.0;
          for (int c = 0; c < g.cols(); ++c) dot += g(r, c) * n.value(r, c);
          for (int c = 0; c < g.cols(); ++c) {
            (*ga)(r, c) += (g(r, c) - dot * n.value(r, c)) / norm;
          }
        }
      }
      return;
    }
  }
}

}  // namespace antispoof::nn
