// tests/test_backend.cc
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

#include "antispoof/frontend.hpp"
#include "antispoof/selftest.hpp"
#include "antispoof/training.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using antispoof::ErrorCode;
using antispoof::Mat;
using antispoof::Rng;
using namespace antispoof::model;
namespace th = test_helpers;

namespace {

Mat random_mat(int rows, int cols, Rng& rng) {
  Mat m(rows, cols);
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.gaussian();
  return m;
}

}  // namespace

TEST_CASE("prepare_fixed_input pads and trims") {
  Rng rng(31);
  const Mat exact = random_mat(5, 3, rng);
  Rng draw1(1);
  CHECK(antispoof::bit_equal(prepare_fixed_input(exact, 5, draw1), exact));

  const Mat shorter = random_mat(3, 4, rng);
  Rng draw2(1);
  const Mat padded = prepare_fixed_input(shorter, 5, draw2);
  REQUIRE(padded.rows() == 5);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) CHECK(padded(r, c) == shorter(r, c));
  }
  for (int r = 3; r < 5; ++r) {
    for (int c = 0; c < 4; ++c) CHECK(padded(r, c) == 0.0);
  }

  const Mat longer = random_mat(10, 2, rng);
  Rng draw3(123);
  const Mat window = prepare_fixed_input(longer, 4, draw3);
  Rng draw3_again(123);
  const int start = static_cast<int>(draw3_again.uniform_int(0, 6));
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 2; ++c) CHECK(window(r, c) == longer(start + r, c));
  }
  // fixed seed reproduces the draw
  Rng draw4(123);
  CHECK(antispoof::bit_equal(prepare_fixed_input(longer, 4, draw4), window));
}

TEST_CASE("chunk_and_score") {
  Rng rng(32);
  const Mat trial = random_mat(6, 2, rng);

  // one exact chunk: scorer sees the trial itself
  double seen_rows = 0;
  const double s1 = chunk_and_score(trial, 6, 6, [&](const Mat& chunk) {
    seen_rows = chunk.rows();
    double diff = 0.0;
    for (int r = 0; r < 6; ++r) {
      for (int c = 0; c < 2; ++c) diff += std::abs(chunk(r, c) - trial(r, c));
    }
    CHECK(diff == 0.0);
    return 0.42;
  });
  CHECK(seen_rows == 6);
  CHECK(s1 == 0.42);

  // constant scorer is invariant to trial length
  for (int n : {1, 5, 17}) {
    const Mat x = random_mat(n, 3, rng);
    CHECK(chunk_and_score(x, 4, 4, [](const Mat&) { return 0.7; }) == doctest::Approx(0.7));
  }

  // two chunks scored by index average to one half
  const Mat two = random_mat(8, 2, rng);
  int index = 0;
  const double s2 =
      chunk_and_score(two, 4, 4, [&](const Mat&) { return static_cast<double>(index++); });
  CHECK(s2 == doctest::Approx(0.5));

  // short trials replicate the last frame up to one full chunk
  Mat tiny(2, 2);
  tiny(0, 0) = 1.0;
  tiny(1, 0) = 2.0;
  tiny(0, 1) = -1.0;
  tiny(1, 1) = -2.0;
  chunk_and_score(tiny, 5, 5, [&](const Mat& chunk) {
    REQUIRE(chunk.rows() == 5);
    for (int r = 2; r < 5; ++r) {
      CHECK(chunk(r, 0) == 2.0);
      CHECK(chunk(r, 1) == -2.0);
    }
    return 0.0;
  });
}

TEST_CASE("hidden length is ceil(N/4), exact for divisible TrimPad lengths") {
  CHECK(BackendConfig::hidden_length(1) == 1);
  CHECK(BackendConfig::hidden_length(4) == 1);
  CHECK(BackendConfig::hidden_length(5) == 2);
  CHECK(BackendConfig::hidden_length(64) == 16);
  CHECK(BackendConfig::hidden_length(750) == 188);  // ceil(750/4)

  Rng rng(33);
  BackendConfig cfg;
  cfg.strategy = Strategy::PoolMean;
  cfg.input_dim = 6;
  cfg.conv_channels = 4;
  cfg.hidden_dim = 4;
  cfg.head_dim = 4;
  const auto loss_cfg = antispoof::loss::LossConfig::preset("p2sgrad");
  const auto params = init_backend_params(cfg, loss_cfg, rng);
  for (int n : {1, 3, 4, 9, 16, 21}) {
    antispoof::nn::Tape tape;
    const auto bound = antispoof::nn::bind_params(tape, params);
    ForwardInfo info;
    backend_forward(tape, tape.constant(random_mat(n, 6, rng)), cfg, bound, &info);
    CHECK(info.hidden_rows == BackendConfig::hidden_length(n));
  }
}

TEST_CASE("PoolMean with identity center-tap convolution passes constants through") {
  BackendConfig cfg;
  cfg.strategy = Strategy::PoolMean;
  cfg.input_dim = 3;
  cfg.conv_channels = 3;
  cfg.hidden_dim = 3;
  cfg.head_dim = 3;
  Rng rng(34);
  auto params = init_backend_params(cfg, antispoof::loss::LossConfig::preset("p2sgrad"), rng);
  // kernel taps are stacked [t-1 | t | t+1]; make the center tap identity
  for (const char* name : {"conv1.w", "conv2.w"}) {
    Mat& w = params.get(name);
    w.fill(0.0);
    for (int c = 0; c < 3; ++c) w(3 + c, c) = 1.0;
  }
  params.get("conv1.b").fill(0.0);
  params.get("conv2.b").fill(0.0);

  Mat constant(9, 3);
  for (int r = 0; r < 9; ++r) {
    constant(r, 0) = 0.5;
    constant(r, 1) = 1.5;
    constant(r, 2) = 0.25;
  }
  antispoof::nn::Tape tape;
  const auto bound = antispoof::nn::bind_params(tape, params);
  const auto emb = backend_forward(tape, tape.constant(constant), cfg, bound);
  const Mat& o = tape.value(emb);
  REQUIRE(o.cols() == 3);
  CHECK(o(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(o(0, 1) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(o(0, 2) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("full-model gradient check on a 7x60-like input") {
  const auto result = antispoof::verify::gradient_check_instance(
      antispoof::loss::LossKind::P2SGrad, Strategy::PoolMean, false, 4242);
  CHECK(result.max_rel_err < 1e-5);
  CHECK(result.coords > 100);
}

TEST_CASE("gradient check with the recurrent mixer under each pooling") {
  for (const auto strategy : {Strategy::PoolMean, Strategy::PoolAttention}) {
    const auto result = antispoof::verify::gradient_check_instance(
        antispoof::loss::LossKind::AmSoftmax, strategy, true, 515);
    CHECK(result.max_rel_err < 1e-5);
  }
}

TEST_CASE("spectrogram compression initializes to the filterbank") {
  BackendConfig cfg;
  cfg.strategy = Strategy::PoolMean;
  cfg.input_dim = 257;
  cfg.compress_input = true;
  cfg.compress_dim = 60;
  cfg.conv_channels = 8;
  cfg.hidden_dim = 8;
  cfg.head_dim = 8;
  Rng rng(35);
  auto params = init_backend_params(cfg, antispoof::loss::LossConfig::preset("p2sgrad"), rng);
  const Mat fb = antispoof::frontend::build_linear_filterbank(60, 512, 16000);
  init_spectrogram_compression(params, fb);

  // at initialization the layer applies the filterbank exactly
  Mat frame(1, 257);
  Rng frg(36);
  for (int k = 0; k < 257; ++k) frame(0, k) = frg.uniform(0.0, 4.0);
  const Mat compressed = antispoof::matmul(frame, params.get("compress.w"));
  REQUIRE(compressed.cols() == 60);
  for (int f = 0; f < 60; ++f) {
    double expect = 0.0;
    for (int k = 0; k < 257; ++k) expect += fb(f, k) * frame(0, k);
    CHECK(compressed(0, f) == doctest::Approx(expect).epsilon(1e-15));
  }
  for (std::size_t i = 0; i < params.get("compress.b").size(); ++i) {
    CHECK(params.get("compress.b").data()[i] == 0.0);
  }

  // one nonzero optimizer step moves the layer away from the filterbank
  const Mat before = params.get("compress.w");
  antispoof::train::AdamState adam(params);
  antispoof::nn::GradBuffer grads(params);
  const int wi = params.index_of("compress.w");
  grads.grads[static_cast<std::size_t>(wi)].fill(1.0);
  adam.step(params, grads, 3e-4);
  CHECK_FALSE(antispoof::bit_equal(params.get("compress.w"), before));
}

TEST_CASE("TrimPad flatten head grows linearly in K") {
  const auto loss_cfg = antispoof::loss::LossConfig::preset("sigmoid");
  auto count_for = [&](int k) {
    BackendConfig cfg;
    cfg.strategy = Strategy::TrimPad;
    cfg.trim_frames = k;
    cfg.input_dim = 6;
    cfg.conv_channels = 4;
    cfg.hidden_dim = 4;
    Rng rng(37);
    return init_backend_params(cfg, loss_cfg, rng).total_size();
  };
  const auto c64 = count_for(64);
  const auto c128 = count_for(128);
  const auto c192 = count_for(192);
  CHECK(c128 - c64 == c192 - c128);
  CHECK(c128 > c64);

  // TrimPad forward requires a prepared input
  BackendConfig cfg;
  cfg.strategy = Strategy::TrimPad;
  cfg.trim_frames = 8;
  cfg.input_dim = 6;
  cfg.conv_channels = 4;
  cfg.hidden_dim = 4;
  Rng rng(38);
  const auto params = init_backend_params(cfg, loss_cfg, rng);
  antispoof::nn::Tape tape;
  const auto bound = antispoof::nn::bind_params(tape, params);
  CHECK(th::caught_code([&] {
          backend_forward(tape, tape.constant(Mat(5, 6)), cfg, bound);
        }) == ErrorCode::ShapeMismatch);
}

TEST_CASE("odd hidden width with recurrent mixer is rejected") {
  BackendConfig cfg;
  cfg.hidden_dim = 7;
  cfg.use_recurrent = true;
  CHECK(th::caught_code([&] {
          cfg.validate(antispoof::loss::LossConfig::preset("p2sgrad"));
        }) == ErrorCode::OddWidth);
}
