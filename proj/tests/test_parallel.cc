// tests/test_parallel.cc
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// The OpenMP kernels and the serial reference paths must be
// bit-identical: every parallel loop writes disjoint outputs and keeps
// the per-element accumulation order fixed.

#include <cmath>

#include "antispoof/bench.hpp"
#include "antispoof/frontend.hpp"
#include "antispoof/training.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using antispoof::Mat;
using antispoof::Rng;
namespace th = test_helpers;

namespace {

struct ParallelGuard {
  bool saved = antispoof::par::enabled();
  ~ParallelGuard() { antispoof::par::set_enabled(saved); }
};

Mat random_mat(int rows, int cols, Rng& rng) {
  Mat m(rows, cols);
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.gaussian();
  return m;
}

}  // namespace

TEST_CASE("matmul kernel equals the serial reference bit-for-bit") {
  ParallelGuard guard;
  Rng rng(101);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 1 + static_cast<int>(rng.uniform_int(0, 40));
    const int k = 1 + static_cast<int>(rng.uniform_int(0, 40));
    const int p = 1 + static_cast<int>(rng.uniform_int(0, 40));
    const Mat a = random_mat(n, k, rng);
    const Mat b = random_mat(k, p, rng);
    antispoof::par::set_enabled(true);
    const Mat fast = antispoof::matmul(a, b);
    const Mat ref = antispoof::matmul_serial(a, b);
    CHECK(antispoof::bit_equal(fast, ref));
  }
}

TEST_CASE("feature extraction is bit-identical with parallelism off and on") {
  ParallelGuard guard;
  antispoof::train::SyntheticConfig synth;
  synth.n_per_class = 3;
  synth.min_duration_s = 0.5;
  synth.max_duration_s = 1.5;
  const auto raw = antispoof::train::generate_synthetic_dataset(5, synth);
  antispoof::frontend::FrontendConfig fe;

  antispoof::par::set_enabled(true);
  const auto par_trials = antispoof::train::extract_trials(raw, fe);
  antispoof::par::set_enabled(false);
  const auto ser_trials = antispoof::train::extract_trials(raw, fe);
  REQUIRE(par_trials.size() == ser_trials.size());
  for (std::size_t i = 0; i < par_trials.size(); ++i) {
    CHECK(antispoof::bit_equal(par_trials[i].features, ser_trials[i].features));
  }
}

TEST_CASE("training is bit-identical with parallelism off and on") {
  ParallelGuard guard;
  antispoof::train::SyntheticConfig synth;
  synth.n_per_class = 3;
  synth.min_duration_s = 0.5;
  synth.max_duration_s = 1.0;
  const auto raw = antispoof::train::generate_synthetic_dataset(9, synth);
  antispoof::frontend::FrontendConfig fe;
  const auto trials = antispoof::train::extract_trials(raw, fe);

  antispoof::model::BackendConfig backend;
  backend.strategy = antispoof::model::Strategy::PoolAttention;
  backend.conv_channels = 8;
  backend.hidden_dim = 8;
  backend.attention_dim = 4;
  backend.head_dim = 8;
  antispoof::train::TrainRunConfig run;
  run.seed = 2;
  run.epochs = 2;
  run.batch_size = 3;
  const auto loss_cfg = antispoof::loss::LossConfig::preset("p2sgrad");

  antispoof::par::set_enabled(true);
  const auto rp = antispoof::train::train_model(trials, backend, loss_cfg, run);
  antispoof::par::set_enabled(false);
  const auto rs = antispoof::train::train_model(trials, backend, loss_cfg, run);
  REQUIRE(rp.params.items().size() == rs.params.items().size());
  for (std::size_t i = 0; i < rp.params.items().size(); ++i) {
    CHECK(antispoof::bit_equal(rp.params.items()[i].value, rs.params.items()[i].value));
  }
  for (std::size_t e = 0; e < rp.log.size(); ++e) {
    CHECK(rp.log[e].mean_loss == rs.log[e].mean_loss);
  }
}

TEST_CASE("bench records are sane") {
  const auto ops = antispoof::bench::registered_ops();
  CHECK(ops.size() >= 8);

  const auto rec = antispoof::bench::run_bench("lfcc_extract.serial", 16000, 1);
  CHECK(rec.median_ns > 0);
  CHECK(rec.throughput > 0.0);
  CHECK(rec.size == 16000);

  const auto line = antispoof::bench::to_csv_line(rec);
  CHECK(line.find("lfcc_extract.serial,16000,") == 0);

  CHECK(th::caught_code([] { antispoof::bench::run_bench("nope", 10, 1); }) ==
        antispoof::ErrorCode::UnknownOp);
}

TEST_CASE("extraction time scales roughly linearly in signal length") {
  // smoke-level: doubling the input should not triple the median time
  const auto short_run = antispoof::bench::run_bench("lfcc_extract.parallel", 16000, 7);
  const auto long_run = antispoof::bench::run_bench("lfcc_extract.parallel", 32000, 7);
  const double ratio = static_cast<double>(long_run.median_ns) /
                       static_cast<double>(short_run.median_ns);
  CHECK(ratio > 1.0);
  CHECK(ratio < 3.0);
}
