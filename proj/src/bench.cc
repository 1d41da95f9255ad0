// src/bench.cc
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "antispoof/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>

#include "antispoof/frontend.hpp"
#include "antispoof/metrics.hpp"
#include "antispoof/training.hpp"

namespace antispoof::bench {

namespace {

struct OpDef {
  std::string name;
  bool parallel;
  // Runs the workload once for `size` input units; returns units processed.
  std::function<std::int64_t(std::int64_t)> body;
};

audio::SignalBuffer synth_signal(std::int64_t n_samples) {
  audio::SignalBuffer sig;
  sig.sample_rate = 16000;
  sig.samples.resize(static_cast<std::size_t>(n_samples));
  Rng rng(42);
  for (auto& s : sig.samples) {
    s = 0.4 * std::sin(2.0 * M_PI * 220.0 * (&s - sig.samples.data()) / 16000.0) +
        0.05 * rng.uniform(-1.0, 1.0);
  }
  return sig;
}

std::int64_t run_extract(frontend::FrontendKind kind, std::int64_t n_samples) {
  frontend::FrontendConfig cfg;
  cfg.kind = kind;
  const auto features = frontend::extract_features(synth_signal(n_samples), cfg);
  return n_samples + features.rows() * 0;  // keep the result alive
}

std::int64_t run_matmul(std::int64_t n) {
  const int dim = static_cast<int>(n);
  Mat a(dim, dim), b(dim, dim);
  Rng rng(7);
  for (std::size_t i = 0; i < a.size(); ++i) a.data()[i] = rng.uniform(-1.0, 1.0);
  for (std::size_t i = 0; i < b.size(); ++i) b.data()[i] = rng.uniform(-1.0, 1.0);
  const Mat c = matmul(a, b);
  return 2 * n * n * n + static_cast<std::int64_t>(c(0, 0) * 0);
}

std::int64_t run_batch_grad(std::int64_t n_trials) {
  train::SyntheticConfig synth;
  synth.n_per_class = static_cast<int>((n_trials + 1) / 2);
  synth.min_duration_s = 1.0;
  synth.max_duration_s = 2.0;
  const auto raw = train::generate_synthetic_dataset(5, synth);
  frontend::FrontendConfig fe;
  const auto trials = train::extract_trials(raw, fe);
  model::BackendConfig backend;
  backend.strategy = model::Strategy::PoolMean;
  train::TrainRunConfig run;
  run.epochs = 1;
  run.batch_size = static_cast<int>(n_trials);
  train::train_model(trials, backend, loss::LossConfig::preset("p2sgrad"), run);
  return n_trials;
}

std::int64_t run_eer(std::int64_t n_scores) {
  Rng rng(9);
  metrics::ScoreSet set;
  for (std::int64_t i = 0; i < n_scores; ++i) {
    const bool bona = (i % 2) == 0;
    set.push_back({"t" + std::to_string(i), bona ? "-" : "A01", bona,
                   rng.uniform(0.0, 1.0) + (bona ? 0.3 : 0.0)});
  }
  metrics::compute_eer(set);
  return n_scores;
}

std::vector<OpDef> make_ops() {
  std::vector<OpDef> ops;
  for (const bool parallel : {false, true}) {
    const std::string suffix = parallel ? ".parallel" : ".serial";
    auto add = [&](const std::string& base, std::function<std::int64_t(std::int64_t)> body) {
      ops.push_back(OpDef{base + suffix, parallel, std::move(body)});
    };
    add("lfcc_extract", [](std::int64_t n) { return run_extract(frontend::FrontendKind::Lfcc, n); });
    add("lfb_extract", [](std::int64_t n) { return run_extract(frontend::FrontendKind::Lfb, n); });
    add("spec_extract", [](std::int64_t n) { return run_extract(frontend::FrontendKind::Spec, n); });
    add("matmul", run_matmul);
    add("batch_grad", run_batch_grad);
    add("eer", run_eer);
  }
  return ops;
}

}  // namespace

std::vector<std::string> registered_ops() {
  std::vector<std::string> names;
  for (const auto& op : make_ops()) names.push_back(op.name);
  return names;
}

BenchRecord run_bench(const std::string& op, std::int64_t size, int repetitions) {
  if (size < 1) raise(ErrorCode::OutOfRange, "size must be positive");
  if (repetitions < 1) raise(ErrorCode::OutOfRange, "repetitions must be >= 1");
  const auto ops = make_ops();
  const OpDef* def = nullptr;
  for (const auto& candidate : ops) {
    if (op == candidate.name) {
      def = &candidate;
      break;
    }
  }
  if (def == nullptr) raise(ErrorCode::UnknownOp, "unregistered op " + op);

  const bool was_parallel = par::enabled();
  par::set_enabled(def->parallel);
  std::int64_t units = 0;
  std::vector<std::int64_t> times;
  times.reserve(static_cast<std::size_t>(repetitions));
  try {
    def->body(size);  // warm-up, discarded
    for (int rep = 0; rep < repetitions; ++rep) {
      const auto start = std::chrono::steady_clock::now();
      units = def->body(size);
      const auto stop = std::chrono::steady_clock::now();
      times.push_back(
          std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());
    }
  } catch (...) {
    par::set_enabled(was_parallel);
    throw;
  }
  par::set_enabled(was_parallel);

  std::sort(times.begin(), times.end());
  const std::int64_t median = times[times.size() / 2];
  BenchRecord record;
  record.op = op;
  record.size = size;
  record.median_ns = std::max<std::int64_t>(median, 1);
  record.throughput = static_cast<double>(units) * 1e9 / static_cast<double>(record.median_ns);
  return record;
}

std::string to_csv_line(const BenchRecord& record) {
  char line[256];
  std::snprintf(line, sizeof(line), "%s,%lld,%lld,%.6g", record.op.c_str(),
                static_cast<long long>(record.size),
                static_cast<long long>(record.median_ns), record.throughput);
  return line;
}

}  // namespace antispoof::bench
