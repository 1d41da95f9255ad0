// include/antispoof/tape.hpp
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef ANTISPOOF_TAPE_HPP_
#define ANTISPOOF_TAPE_HPP_

#include <vector>

#include "antispoof/mat.hpp"

namespace antispoof::nn {

using VarId = int;

// Reverse-mode differentiation over a statically declared computation.
// Every operation records one node; backward() walks the nodes once in
// reverse creation order. There is no graph reuse: a tape is built per
// forward pass and discarded.
class Tape {
 public:
  VarId input(Mat value);     // leaf that participates in backward
  VarId constant(Mat value);  // leaf with no gradient

  VarId matmul(VarId a, VarId b);
  VarId transpose(VarId a);
  VarId add(VarId a, VarId b);
  VarId sub(VarId a, VarId b);
  VarId mul(VarId a, VarId b);  // elementwise
  VarId scale(VarId a, double s);
  VarId affine(VarId a, double m, double c);  // m*x + c elementwise
  VarId add_rowvec(VarId a, VarId v);         // v is 1 x C, broadcast over rows

  VarId tanh(VarId a);
  VarId sigmoid(VarId a);
  VarId leaky_relu(VarId a, double slope);
  VarId softplus(VarId a);  // log(1 + e^x), overflow-safe
  VarId square(VarId a);
  // acos of the value clamped into [-(1-eps), 1-eps]; gradient is zero in
  // the clamped region.
  VarId acos_clamped(VarId a, double eps);
  VarId cos(VarId a);

  VarId sum(VarId a);        // -> 1x1
  VarId mean_rows(VarId a);  // N x D -> 1 x D
  VarId softmax_col(VarId a);      // N x 1 -> N x 1
  VarId log_softmax_row(VarId a);  // 1 x C -> 1 x C
  VarId pick(VarId a, int r, int c);  // -> 1x1

  VarId concat_cols(VarId a, VarId b);
  VarId concat_rows(const std::vector<VarId>& parts);
  VarId slice_cols(VarId a, int lo, int hi);
  VarId row(VarId a, int r);  // 1 x D copy of one row
  VarId reverse_rows(VarId a);
  VarId flatten_to_row(VarId a);  // N x D -> 1 x (N*D), row-major

  // Stacks kernel_size row-neighborhoods with stride; zero padding of
  // (kernel_size-1)/2 rows on both ends, so the output has
  // ceil(N/stride) rows of kernel_size*C columns.
  VarId im2col(VarId a, int kernel_size, int stride);

  // Each row scaled to unit Euclidean norm; raises ZeroVector on a zero
  // row. Gradient per row v: (I - vv^T/|v|^2) g / |v|.
  VarId normalize_rows(VarId a);

  void backward(VarId loss);

  const Mat& value(VarId id) const { return nodes_[static_cast<std::size_t>(id)].value; }
  // Gradient accumulated by the last backward(); zeros if the node was
  // not visited.
  Mat grad_of(VarId id) const;
  std::size_t node_count() const { return nodes_.size(); }

 private:
  enum class Op {
    Input, Constant, MatMul, Transpose, Add, Sub, Mul, Affine,
    AddRowVec, Tanh, Sigmoid, LeakyRelu, Softplus, Square, AcosClamped,
    Cos, Sum, MeanRows, SoftmaxCol, LogSoftmaxRow, Pick, ConcatCols,
    ConcatRows, SliceCols, Row, ReverseRows, Flatten, Im2Col, NormalizeRows,
  };

  struct Node {
    Op op;
    int a = -1;
    int b = -1;
    std::vector<int> parts;
    double p0 = 0.0;
    int i0 = 0;
    int i1 = 0;
    Mat value;
    Mat grad;
    bool needs_grad = false;
  };

  VarId push(Node node);
  Node& at(VarId id) { return nodes_[static_cast<std::size_t>(id)]; }
  const Node& at(VarId id) const { return nodes_[static_cast<std::size_t>(id)]; }
  Mat& grad_buffer(VarId id);
  void backprop_node(VarId id);

  std::vector<Node> nodes_;
};

}  // namespace antispoof::nn

#endif  // ANTISPOOF_TAPE_HPP_
