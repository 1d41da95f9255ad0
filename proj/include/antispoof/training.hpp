// include/antispoof/training.hpp
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef ANTISPOOF_TRAINING_HPP_
#define ANTISPOOF_TRAINING_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "antispoof/backend.hpp"
#include "antispoof/frontend.hpp"
#include "antispoof/metrics.hpp"

namespace antispoof::train {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// First/second moment buffers aligned with the ParamStore item order.
class AdamState {
 public:
  explicit AdamState(const nn::ParamStore& params);
  void step(nn::ParamStore& params, const nn::GradBuffer& grads, double lr,
            const AdamConfig& cfg = {});
  std::int64_t step_count() const { return t_; }

 private:
  std::vector<Mat> m_;
  std::vector<Mat> v_;
  std::int64_t t_ = 0;
};

// lr0 * 0.5^(epoch/10), halved every ten epochs.
double lr_at_epoch(int epoch, double lr0 = 3e-4);

struct Trial {
  std::string trial_id;
  std::string attack_id;  // "-" for bonafide
  bool bonafide = false;
  Mat features;  // N x D
  int label() const { return bonafide ? 1 : 2; }
};

// Duration-bucketed batching: trials sorted by duration (frame count,
// ties by index), cut into contiguous buckets of batch_size, bucket order
// shuffled. Every trial appears exactly once.
std::vector<std::vector<int>> make_batches(const std::vector<int>& durations,
                                           int batch_size, Rng& rng);

struct SyntheticConfig {
  int n_per_class = 200;
  int sample_rate = 16000;
  double min_duration_s = 1.0;
  double max_duration_s = 4.0;
};

struct RawTrial {
  std::string trial_id;
  std::string attack_id;
  bool bonafide = false;
  audio::SignalBuffer signal;
};

// Paired corpus: each bonafide trial is a sum of three harmonics of a
// random fundamental plus low-passed noise; its spoof counterpart is the
// same signal amplitude-quantized to 4 bits (step 2^-3), which smears
// broadband distortion across the spectrum. Deterministic per seed.
std::vector<RawTrial> generate_synthetic_dataset(std::uint64_t seed,
                                                 const SyntheticConfig& cfg);

std::vector<Trial> extract_trials(const std::vector<RawTrial>& raw,
                                  const frontend::FrontendConfig& cfg);

struct TrainRunConfig {
  std::uint64_t seed = 1;
  int batch_size = 8;
  int epochs = 30;
  double lr0 = 3e-4;
};

struct EpochLog {
  int epoch;
  double lr;
  double mean_loss;
};

struct TrainResult {
  nn::ParamStore params;
  std::vector<EpochLog> log;
};

// One seeded generator drives the whole run in a fixed order: parameter
// init first, then per epoch the batch shuffle followed by the TrimPad /
// chunk window draws in ascending within-batch order. Per-trial gradients
// are computed in parallel and reduced in ascending trial order, so the
// result is bit-reproducible for a fixed seed.
TrainResult train_model(const std::vector<Trial>& trials,
                        const model::BackendConfig& backend_cfg,
                        const loss::LossConfig& loss_cfg, const TrainRunConfig& run);

// Deterministic except the TrimPad window draw, which consumes the
// dedicated eval_seed in ascending trial order.
metrics::ScoreSet score_trials(const std::vector<Trial>& trials,
                               const nn::ParamStore& params,
                               const model::BackendConfig& backend_cfg,
                               const loss::LossConfig& loss_cfg,
                               std::uint64_t eval_seed);

void write_train_log(const std::vector<EpochLog>& log, const std::filesystem::path& path);

}  // namespace antispoof::train

#endif  // ANTISPOOF_TRAINING_HPP_
