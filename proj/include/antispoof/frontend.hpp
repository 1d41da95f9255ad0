// include/antispoof/frontend.hpp
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef ANTISPOOF_FRONTEND_HPP_
#define ANTISPOOF_FRONTEND_HPP_

#include <span>
#include <vector>

#include "antispoof/audio_io.hpp"
#include "antispoof/mat.hpp"

namespace antispoof::frontend {

enum class FrontendKind { Spec, Lfb, Lfcc };
enum class WindowKind { Hann, Rect };

struct FrontendConfig {
  int sample_rate = 16000;
  double frame_len_ms = 20.0;
  double frame_shift_ms = 10.0;
  int nfft = 512;
  FrontendKind kind = FrontendKind::Lfcc;
  int lfb_channels = 60;
  int lfcc_channels = 20;
  int lfcc_ceps = 20;
  int delta_window = 2;
  double log_floor = 1e-12;
  WindowKind window = WindowKind::Hann;

  int frame_len_samples() const;
  int frame_shift_samples() const;
  // 257 for Spec, 60 for Lfb, 60 for Lfcc (20 static + 20 delta + 20 delta-delta)
  int feature_dim() const;
  void validate() const;
};

// Frame m covers samples [m*shift, m*shift + frame_len); the tail is
// zero-padded. Frame count is ceil(len/shift), so every frame start lies
// inside the signal. Result is frames-as-rows.
Mat frame_signal(const audio::SignalBuffer& signal, const FrontendConfig& cfg);

// Symmetric Hann window of length n (w = 1 for n == 1).
std::vector<double> hann_window(int n);

// |DFT_k|^2 for k = 0..nfft/2 of the windowed, zero-padded frame. An empty
// window span means rectangular. nfft must be a power of two.
std::vector<double> power_spectrum(std::span<const double> frame, int nfft,
                                   std::span<const double> window = {});

// Triangular filters with centers linearly spaced over num_filters+2
// boundary points between 0 and Nyquist, evaluated on the rounded-bin
// grid so each filter peaks at exactly 1 on its center bin and reaches 0
// on its neighbors' center bins. Shape: num_filters x (nfft/2 + 1).
Mat build_linear_filterbank(int num_filters, int nfft, int sample_rate);

// Orthonormal DCT-II, coefficients 0..n_out-1.
std::vector<double> dct_ii(std::span<const double> v, int n_out);
Mat dct_ii_basis(int m, int n_out);

// Regression deltas with window W and edge replication:
//   d_n = sum_{w=1..W} w * (x_{n+w} - x_{n-w}) / (2 * sum_{w} w^2)
Mat compute_deltas(const Mat& statics, int window);

Mat extract_features(const audio::SignalBuffer& signal, const FrontendConfig& cfg);

}  // namespace antispoof::frontend

#endif  // ANTISPOOF_FRONTEND_HPP_
