// include/antispoof/mat.hpp
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef ANTISPOOF_MAT_HPP_
#define ANTISPOOF_MAT_HPP_

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "antispoof/common.hpp"

namespace antispoof {

// Dense row-major matrix of doubles. All internal math is 64-bit; 32-bit
// precision appears only at the feature-cache boundary.
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols);
  static Mat of(std::initializer_list<std::initializer_list<double>> rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(int r, int c) {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }
  double operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  bool same_shape(const Mat& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  void fill(double v);
  bool all_finite() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

bool bit_equal(const Mat& a, const Mat& b);

// OpenMP kernel (rows of the result in parallel). The serial reference
// accumulates in the same k-ascending order, so the two are bit-identical.
Mat matmul(const Mat& a, const Mat& b);
Mat matmul_serial(const Mat& a, const Mat& b);

Mat transpose(const Mat& a);

}  // namespace antispoof

#endif  // ANTISPOOF_MAT_HPP_
