// include/antispoof/backend.hpp
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef ANTISPOOF_BACKEND_HPP_
#define ANTISPOOF_BACKEND_HPP_

#include <functional>

#include "antispoof/losses.hpp"
#include "antispoof/nn.hpp"

namespace antispoof::model {

enum class Strategy { TrimPad, Chunked, PoolMean, PoolAttention };

// The trainable back end is two temporal convolution blocks (kernel 3,
// stride 2 each, so the stride product L is 4) followed by an optional
// bidirectional recurrent mixer and the strategy's pooling stage.
struct BackendConfig {
  Strategy strategy = Strategy::PoolMean;
  int trim_frames = 750;    // K for TrimPad
  int chunk_frames = 100;   // chunk length for Chunked
  int chunk_shift = 100;    // non-overlapping by default
  int input_dim = 60;       // feature dimension entering the conv stack
  int conv_channels = 32;   // width of the first conv block
  int hidden_dim = 32;      // D_h: conv output width and embedding size
  bool compress_input = false;  // dense 257 -> 60 in front (spectrogram)
  int compress_dim = 60;
  bool use_recurrent = false;
  int attention_dim = 16;  // D_a; 0 means hidden_dim / 2
  int head_dim = 64;       // projection before the cosine heads
  double leaky_slope = 0.01;

  static constexpr int kStrideProduct = 4;  // two stride-2 blocks
  int effective_attention_dim() const { return attention_dim > 0 ? attention_dim : hidden_dim / 2; }
  // Sequence length after the conv stack for an N-frame input.
  static int hidden_length(int n_frames);
  void validate(const loss::LossConfig& loss_cfg) const;
};

// TrimPad input preparation: short trials are zero padded to K rows;
// long ones contribute a contiguous window x[n : n+K) with n drawn
// uniformly from [0, N-K].
Mat prepare_fixed_input(const Mat& features, int k, Rng& rng);

// Replicates the last frame until the trial reaches at least one full
// chunk, then scores each chunk and averages.
double chunk_and_score(const Mat& features, int chunk_frames, int chunk_shift,
                       const std::function<double(const Mat&)>& scorer);

// Fresh parameters for the configured back end and loss head, glorot
// initialized from the run's generator in a fixed declaration order.
nn::ParamStore init_backend_params(const BackendConfig& cfg,
                                   const loss::LossConfig& loss_cfg, Rng& rng);

// Overwrites the input compression layer with the 60-channel filterbank
// (weights = filterbank, bias = 0); the layer stays trainable.
void init_spectrogram_compression(nn::ParamStore& params, const Mat& filterbank);

struct ForwardInfo {
  int hidden_rows = 0;  // sequence length entering the pooling stage
  nn::VarId attention_weights = -1;
};

// Embedding construction: [compression] -> conv stack -> [recurrent] ->
// pooling (mean / attention / flatten+dense for TrimPad). The input of a
// TrimPad forward must already be prepared to exactly K rows.
nn::VarId backend_forward(nn::Tape& tape, nn::VarId input, const BackendConfig& cfg,
                          const nn::BoundParams& bound, ForwardInfo* info = nullptr);

}  // namespace antispoof::model

#endif  // ANTISPOOF_BACKEND_HPP_
