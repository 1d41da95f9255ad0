// src/mat.cc
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "antispoof/mat.hpp"

#include <atomic>
#include <cmath>
#include <cstring>

namespace antispoof {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotWav: return "NotWav";
    case ErrorCode::UnsupportedEncoding: return "UnsupportedEncoding";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::EmptySignal: return "EmptySignal";
    case ErrorCode::FrameTooLong: return "FrameTooLong";
    case ErrorCode::TooManyFilters: return "TooManyFilters";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::OddWidth: return "OddWidth";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::InvalidCosine: return "InvalidCosine";
    case ErrorCode::NonFiniteGradient: return "NonFiniteGradient";
    case ErrorCode::DivergedLoss: return "DivergedLoss";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::DegenerateCost: return "DegenerateCost";
    case ErrorCode::TrialMismatch: return "TrialMismatch";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::DuplicateTrial: return "DuplicateTrial";
    case ErrorCode::NonNumericScore: return "NonNumericScore";
    case ErrorCode::UnknownOp: return "UnknownOp";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "UnknownError";
}

namespace par {

namespace {
std::atomic<bool> g_enabled{true};
}  // namespace

bool enabled() { return g_enabled.load(std::memory_order_relaxed); }
void set_enabled(bool on) { g_enabled.store(on, std::memory_order_relaxed); }

}  // namespace par

Mat::Mat(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) {
    raise(ErrorCode::ShapeMismatch, "negative matrix dimension");
  }
  data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0);
}

Mat Mat::of(std::initializer_list<std::initializer_list<double>> rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r == 0 ? 0 : static_cast<int>(rows.begin()->size());
  Mat m(r, c);
  int i = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != c) {
      raise(ErrorCode::ShapeMismatch, "ragged initializer");
    }
    int j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

void Mat::fill(double v) {
  for (double& x : data_) x = v;
}

bool Mat::all_finite() const {
  for (double x : data_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

bool bit_equal(const Mat& a, const Mat& b) {
  if (!a.same_shape(b)) return false;
  return a.size() == 0 ||
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

namespace {

inline void matmul_row(const Mat& a, const Mat& b, Mat& out, int i) {
  const int n = a.cols();
  const int p = b.cols();
  const double* arow = a.data() + static_cast<std::size_t>(i) * n;
  double* orow = out.data() + static_cast<std::size_t>(i) * p;
  for (int k = 0; k < n; ++k) {
    const double aik = arow[k];
    const double* brow = b.data() + static_cast<std::size_t>(k) * p;
    for (int j = 0; j < p; ++j) orow[j] += aik * brow[j];
  }
}

}  // namespace

Mat matmul(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) {
    raise(ErrorCode::ShapeMismatch, "matmul inner dimensions disagree");
  }
  Mat out(a.rows(), b.cols());
  par::for_each_index(a.rows(), [&](int i) { matmul_row(a, b, out, i); });
  return out;
}

Mat matmul_serial(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) {
    raise(ErrorCode::ShapeMismatch, "matmul inner dimensions disagree");
  }
  Mat out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) matmul_row(a, b, out, i);
  return out;
}

Mat transpose(const Mat& a) {
  Mat out(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  }
  return out;
}

}  // namespace antispoof
