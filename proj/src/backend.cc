// src/backend.cc
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "antispoof/backend.hpp"

#include <cmath>

namespace antispoof::model {

int BackendConfig::hidden_length(int n_frames) {
  // ceil(n/2) twice = ceil(n/4)
  const int after1 = (n_frames - 1) / 2 + 1;
  return (after1 - 1) / 2 + 1;
}

void BackendConfig::validate(const loss::LossConfig& loss_cfg) const {
  if (trim_frames < 1) raise(ErrorCode::ConfigError, "trim_frames must be >= 1");
  if (chunk_frames < 1 || chunk_shift < 1) {
    raise(ErrorCode::ConfigError, "chunk settings must be positive");
  }
  if (input_dim < 1 || conv_channels < 1 || hidden_dim < 1) {
    raise(ErrorCode::ConfigError, "layer widths must be positive");
  }
  if (use_recurrent && hidden_dim % 2 != 0) {
    raise(ErrorCode::OddWidth, "hidden_dim must be even with the recurrent mixer");
  }
  if (loss_cfg.uses_cosine_head() && head_dim < 1) {
    raise(ErrorCode::ConfigError, "head_dim must be positive");
  }
}

Mat prepare_fixed_input(const Mat& features, int k, Rng& rng) {
  const int n = features.rows();
  const int d = features.cols();
  Mat out(k, d);
  if (n <= k) {
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < d; ++c) out(r, c) = features(r, c);
    }
    return out;  // rows n..k stay zero
  }
  const int start = static_cast<int>(rng.uniform_int(0, n - k));
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < d; ++c) out(r, c) = features(start + r, c);
  }
  return out;
}

double chunk_and_score(const Mat& features, int chunk_frames, int chunk_shift,
                       const std::function<double(const Mat&)>& scorer) {
  if (features.rows() < 1) raise(ErrorCode::EmptySequence, "cannot chunk an empty trial");
  const int d = features.cols();
  Mat padded = features;
  if (padded.rows() < chunk_frames) {
    Mat grown(chunk_frames, d);
    for (int r = 0; r < chunk_frames; ++r) {
      const int src = std::min(r, features.rows() - 1);
      for (int c = 0; c < d; ++c) grown(r, c) = features(src, c);
    }
    padded = std::move(grown);
  }
  double total = 0.0;
  int chunks = 0;
  for (int start = 0; start + chunk_frames <= padded.rows(); start += chunk_shift) {
    Mat chunk(chunk_frames, d);
    for (int r = 0; r < chunk_frames; ++r) {
      for (int c = 0; c < d; ++c) chunk(r, c) = padded(start + r, c);
    }
    total += scorer(chunk);
    ++chunks;
  }
  return total / chunks;
}

nn::ParamStore init_backend_params(const BackendConfig& cfg,
                                   const loss::LossConfig& loss_cfg, Rng& rng) {
  cfg.validate(loss_cfg);
  nn::ParamStore store;
  auto dense = [&](const std::string& name, int in, int out) {
    Mat w(in, out);
    nn::glorot_init(w, in, out, rng);
    store.add(name + ".w", std::move(w));
    store.add(name + ".b", Mat(1, out));
  };

  int conv_in = cfg.input_dim;
  if (cfg.compress_input) {
    dense("compress", cfg.input_dim, cfg.compress_dim);
    conv_in = cfg.compress_dim;
  }
  dense("conv1", 3 * conv_in, cfg.conv_channels);
  dense("conv2", 3 * cfg.conv_channels, cfg.hidden_dim);

  if (cfg.use_recurrent) {
    const int h = cfg.hidden_dim / 2;
    for (const std::string layer : {"rec1", "rec2"}) {
      for (const std::string dir : {"fwd", "bwd"}) {
        Mat w(cfg.hidden_dim, 3 * h);
        nn::glorot_init(w, cfg.hidden_dim, 3 * h, rng);
        store.add(layer + "." + dir + ".w", std::move(w));
        Mat u(h, 3 * h);
        nn::glorot_init(u, h, 3 * h, rng);
        store.add(layer + "." + dir + ".u", std::move(u));
        store.add(layer + "." + dir + ".b", Mat(1, 3 * h));
      }
    }
  }

  switch (cfg.strategy) {
    case Strategy::PoolAttention: {
      const int da = cfg.effective_attention_dim();
      Mat w(cfg.hidden_dim, da);
      nn::glorot_init(w, cfg.hidden_dim, da, rng);
      store.add("attn.w", std::move(w));
      store.add("attn.b", Mat(1, da));
      Mat u(da, 1);
      nn::glorot_init(u, da, 1, rng);
      store.add("attn.u", std::move(u));
      break;
    }
    case Strategy::TrimPad: {
      const int flat = BackendConfig::hidden_length(cfg.trim_frames) * cfg.hidden_dim;
      dense("flatten", flat, cfg.hidden_dim);
      break;
    }
    case Strategy::PoolMean:
    case Strategy::Chunked:
      break;
  }

  if (loss_cfg.uses_cosine_head()) {
    dense("head.proj", cfg.hidden_dim, cfg.head_dim);
    Mat cw(loss_cfg.num_classes, cfg.head_dim);
    nn::glorot_init(cw, loss_cfg.num_classes, cfg.head_dim, rng);
    store.add("head.class_w", std::move(cw));
  } else {
    Mat w(cfg.hidden_dim, 1);
    nn::glorot_init(w, cfg.hidden_dim, 1, rng);
    store.add("head.w", std::move(w));
    store.add("head.b", Mat(1, 1));
  }
  return store;
}

void init_spectrogram_compression(nn::ParamStore& params, const Mat& filterbank) {
  Mat& w = params.get("compress.w");
  // compress.w maps row vectors, so it holds the filterbank transposed.
  if (w.rows() != filterbank.cols() || w.cols() != filterbank.rows()) {
    raise(ErrorCode::ShapeMismatch, "filterbank shape does not match compression layer");
  }
  w = transpose(filterbank);
  params.get("compress.b").fill(0.0);
}

nn::VarId backend_forward(nn::Tape& tape, nn::VarId input, const BackendConfig& cfg,
                          const nn::BoundParams& bound, ForwardInfo* info) {
  const Mat& x = tape.value(input);
  if (x.rows() < 1) raise(ErrorCode::EmptySequence, "empty input sequence");
  if (cfg.strategy == Strategy::TrimPad && x.rows() != cfg.trim_frames) {
    raise(ErrorCode::ShapeMismatch, "TrimPad forward expects a prepared K-frame input");
  }

  nn::VarId h = input;
  if (cfg.compress_input) {
    h = tape.add_rowvec(tape.matmul(h, bound.id("compress.w")), bound.id("compress.b"));
  }
  for (const std::string name : {"conv1", "conv2"}) {
    const nn::VarId cols = tape.im2col(h, 3, 2);
    h = tape.leaky_relu(
        tape.add_rowvec(tape.matmul(cols, bound.id(name + ".w")), bound.id(name + ".b")),
        cfg.leaky_slope);
  }
  if (cfg.use_recurrent) {
    h = nn::recurrent_stack_node(tape, h, bound, "rec");
  }
  if (info != nullptr) info->hidden_rows = tape.value(h).rows();

  switch (cfg.strategy) {
    case Strategy::PoolMean:
    case Strategy::Chunked:
      return tape.mean_rows(h);
    case Strategy::PoolAttention: {
      nn::VarId weights = -1;
      const nn::VarId pooled = nn::attention_pool_node(
          tape, h, bound.id("attn.w"), bound.id("attn.b"), bound.id("attn.u"), &weights);
      if (info != nullptr) info->attention_weights = weights;
      return pooled;
    }
    case Strategy::TrimPad: {
      const nn::VarId flat = tape.flatten_to_row(h);
      return tape.add(tape.matmul(flat, bound.id("flatten.w")), bound.id("flatten.b"));
    }
  }
  raise(ErrorCode::ConfigError, "unknown strategy");
}

}  // namespace antispoof::model
