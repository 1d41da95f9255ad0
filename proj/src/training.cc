// src/training.cc
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "antispoof/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

namespace antispoof::train {

AdamState::AdamState(const nn::ParamStore& params) {
  for (const auto& item : params.items()) {
    m_.emplace_back(item.value.rows(), item.value.cols());
    v_.emplace_back(item.value.rows(), item.value.cols());
  }
}

void AdamState::step(nn::ParamStore& params, const nn::GradBuffer& grads, double lr,
                     const AdamConfig& cfg) {
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < m_.size(); ++i) {
    Mat& theta = params.items()[i].value;
    const Mat& g = grads.grads[i];
    for (std::size_t j = 0; j < theta.size(); ++j) {
      const double gj = g.data()[j];
      if (!std::isfinite(gj)) {
        raise(ErrorCode::NonFiniteGradient,
              "gradient for " + params.items()[i].name + " is not finite");
      }
      double& mj = m_[i].data()[j];
      double& vj = v_[i].data()[j];
      mj = cfg.beta1 * mj + (1.0 - cfg.beta1) * gj;
      vj = cfg.beta2 * vj + (1.0 - cfg.beta2) * gj * gj;
      const double mhat = mj / bc1;
      const double vhat = vj / bc2;
      theta.data()[j] -= lr * mhat / (std::sqrt(vhat) + cfg.eps);
    }
  }
}

double lr_at_epoch(int epoch, double lr0) {
  return lr0 * std::pow(0.5, static_cast<double>(epoch / 10));
}

std::vector<std::vector<int>> make_batches(const std::vector<int>& durations,
                                           int batch_size, Rng& rng) {
  const int n = static_cast<int>(durations.size());
  if (n < 1) raise(ErrorCode::EmptySequence, "no trials to batch");
  if (batch_size < 1) raise(ErrorCode::ConfigError, "batch_size must be >= 1");
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return durations[static_cast<std::size_t>(a)] < durations[static_cast<std::size_t>(b)];
  });
  std::vector<std::vector<int>> batches;
  for (int start = 0; start < n; start += batch_size) {
    const int end = std::min(n, start + batch_size);
    batches.emplace_back(order.begin() + start, order.begin() + end);
  }
  rng.shuffle(batches);
  return batches;
}

std::vector<RawTrial> generate_synthetic_dataset(std::uint64_t seed,
                                                 const SyntheticConfig& cfg) {
  if (cfg.n_per_class < 1) raise(ErrorCode::ConfigError, "n_per_class must be >= 1");
  Rng rng(seed);
  std::vector<RawTrial> out;
  out.reserve(static_cast<std::size_t>(cfg.n_per_class) * 2);
  constexpr double kQuantStep = 0.125;  // 4-bit amplitude grid
  for (int i = 0; i < cfg.n_per_class; ++i) {
    const double duration = rng.uniform(cfg.min_duration_s, cfg.max_duration_s);
    const std::size_t n_samples =
        static_cast<std::size_t>(std::llround(duration * cfg.sample_rate));
    const double f0 = rng.uniform(80.0, 400.0);
    double amp[3], phase[3];
    for (int h = 0; h < 3; ++h) {
      amp[h] = rng.uniform(0.08, 0.25);
      phase[h] = rng.uniform(0.0, 2.0 * M_PI);
    }
    audio::SignalBuffer bona;
    bona.sample_rate = cfg.sample_rate;
    bona.samples.resize(n_samples);
    double lp = 0.0;
    for (std::size_t t = 0; t < n_samples; ++t) {
      double s = 0.0;
      for (int h = 0; h < 3; ++h) {
        s += amp[h] * std::sin(2.0 * M_PI * f0 * (h + 1) * t / cfg.sample_rate + phase[h]);
      }
      lp = 0.9 * lp + 0.1 * rng.uniform(-1.0, 1.0);
      bona.samples[t] = s + 0.05 * lp;
    }
    audio::SignalBuffer spoof = bona;
    for (double& s : spoof.samples) {
      s = std::round(s / kQuantStep) * kQuantStep;
    }
    char id[32];
    std::snprintf(id, sizeof(id), "SYN_B_%04d", i);
    out.push_back(RawTrial{id, "-", true, std::move(bona)});
    std::snprintf(id, sizeof(id), "SYN_S_%04d", i);
    out.push_back(RawTrial{id, "A01", false, std::move(spoof)});
  }
  return out;
}

std::vector<Trial> extract_trials(const std::vector<RawTrial>& raw,
                                  const frontend::FrontendConfig& cfg) {
  std::vector<Trial> trials(raw.size());
  par::for_each_index(static_cast<int>(raw.size()), [&](int i) {
    const auto idx = static_cast<std::size_t>(i);
    trials[idx].trial_id = raw[idx].trial_id;
    trials[idx].attack_id = raw[idx].attack_id;
    trials[idx].bonafide = raw[idx].bonafide;
    trials[idx].features = frontend::extract_features(raw[idx].signal, cfg);
  });
  return trials;
}

namespace {

// Input preparation shared by training and scoring. TrimPad and Chunked
// training consume a window start drawn ahead of the parallel section
// (-1 means "use the trial as is", i.e. pad only).
Mat training_view(const Mat& features, const model::BackendConfig& cfg, int window_start) {
  const int k = cfg.strategy == model::Strategy::TrimPad  ? cfg.trim_frames
                : cfg.strategy == model::Strategy::Chunked ? cfg.chunk_frames
                                                           : 0;
  if (k == 0) return features;
  Mat out(k, features.cols());
  const int n = features.rows();
  if (window_start < 0) {
    for (int r = 0; r < std::min(n, k); ++r) {
      for (int c = 0; c < features.cols(); ++c) out(r, c) = features(r, c);
    }
    if (cfg.strategy == model::Strategy::Chunked && n < k) {
      for (int r = n; r < k; ++r) {
        for (int c = 0; c < features.cols(); ++c) out(r, c) = features(n - 1, c);
      }
    }
    return out;
  }
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < features.cols(); ++c) out(r, c) = features(window_start + r, c);
  }
  return out;
}

int draw_window_start(const Mat& features, const model::BackendConfig& cfg, Rng& rng) {
  const int k = cfg.strategy == model::Strategy::TrimPad  ? cfg.trim_frames
                : cfg.strategy == model::Strategy::Chunked ? cfg.chunk_frames
                                                           : 0;
  if (k == 0 || features.rows() <= k) return -1;
  return static_cast<int>(rng.uniform_int(0, features.rows() - k));
}

double trial_loss_with_grads(const Trial& trial, const Mat& view,
                             const nn::ParamStore& params,
                             const model::BackendConfig& backend_cfg,
                             const loss::LossConfig& loss_cfg, nn::GradBuffer& grads) {
  nn::Tape tape;
  const nn::VarId x = tape.constant(view);
  const nn::BoundParams bound = nn::bind_params(tape, params);
  const nn::VarId embedding = model::backend_forward(tape, x, backend_cfg, bound);
  const loss::HeadOutputs head =
      loss::attach_head(tape, embedding, trial.label(), loss_cfg, bound);
  tape.backward(head.loss);
  nn::collect_grads(tape, bound, grads);
  return tape.value(head.loss)(0, 0);
}

}  // namespace

TrainResult train_model(const std::vector<Trial>& trials,
                        const model::BackendConfig& backend_cfg,
                        const loss::LossConfig& loss_cfg, const TrainRunConfig& run) {
  if (trials.empty()) raise(ErrorCode::EmptySequence, "no training trials");
  if (run.epochs < 1 || run.batch_size < 1) {
    raise(ErrorCode::ConfigError, "epochs and batch_size must be >= 1");
  }
  Rng rng(run.seed);
  TrainResult result;
  result.params = model::init_backend_params(backend_cfg, loss_cfg, rng);
  AdamState adam(result.params);

  std::vector<int> durations;
  durations.reserve(trials.size());
  for (const auto& t : trials) durations.push_back(t.features.rows());

  for (int epoch = 0; epoch < run.epochs; ++epoch) {
    const double lr = lr_at_epoch(epoch, run.lr0);
    const auto batches = make_batches(durations, run.batch_size, rng);
    double loss_sum = 0.0;
    for (const auto& batch : batches) {
      const int bn = static_cast<int>(batch.size());
      std::vector<int> window_starts(batch.size());
      for (std::size_t i = 0; i < batch.size(); ++i) {
        window_starts[i] =
            draw_window_start(trials[static_cast<std::size_t>(batch[i])].features,
                              backend_cfg, rng);
      }
      std::vector<nn::GradBuffer> trial_grads(batch.size(), nn::GradBuffer(result.params));
      std::vector<double> trial_losses(batch.size(), 0.0);
      par::for_each_index(bn, [&](int i) {
        const auto idx = static_cast<std::size_t>(i);
        const Trial& trial = trials[static_cast<std::size_t>(batch[idx])];
        const Mat view = training_view(trial.features, backend_cfg, window_starts[idx]);
        trial_losses[idx] = trial_loss_with_grads(trial, view, result.params, backend_cfg,
                                                  loss_cfg, trial_grads[idx]);
      });
      nn::GradBuffer batch_grads(result.params);
      for (const auto& g : trial_grads) batch_grads.accumulate(g);
      batch_grads.scale(1.0 / bn);
      adam.step(result.params, batch_grads, lr);
      for (double l : trial_losses) loss_sum += l;
    }
    const double mean_loss = loss_sum / static_cast<double>(trials.size());
    if (!std::isfinite(mean_loss)) {
      raise(ErrorCode::DivergedLoss, "mean training loss is not finite");
    }
    result.log.push_back(EpochLog{epoch, lr, mean_loss});
  }
  return result;
}

metrics::ScoreSet score_trials(const std::vector<Trial>& trials,
                               const nn::ParamStore& params,
                               const model::BackendConfig& backend_cfg,
                               const loss::LossConfig& loss_cfg,
                               std::uint64_t eval_seed) {
  Rng rng(eval_seed);
  std::vector<int> window_starts(trials.size(), -1);
  if (backend_cfg.strategy == model::Strategy::TrimPad) {
    for (std::size_t i = 0; i < trials.size(); ++i) {
      window_starts[i] = draw_window_start(trials[i].features, backend_cfg, rng);
    }
  }
  metrics::ScoreSet scores(trials.size());
  par::for_each_index(static_cast<int>(trials.size()), [&](int i) {
    const auto idx = static_cast<std::size_t>(i);
    const Trial& trial = trials[idx];
    auto score_view = [&](const Mat& view) {
      nn::Tape tape;
      const nn::VarId x = tape.constant(view);
      const nn::BoundParams bound = nn::bind_params(tape, params);
      const nn::VarId embedding = model::backend_forward(tape, x, backend_cfg, bound);
      const loss::HeadOutputs head = loss::attach_head(tape, embedding, 0, loss_cfg, bound);
      return loss::inference_score(head, tape, loss_cfg);
    };
    double s = 0.0;
    if (backend_cfg.strategy == model::Strategy::Chunked) {
      s = model::chunk_and_score(trial.features, backend_cfg.chunk_frames,
                                 backend_cfg.chunk_shift, score_view);
    } else {
      const Mat view = training_view(trial.features, backend_cfg, window_starts[idx]);
      s = score_view(view);
    }
    scores[idx] = metrics::ScoreRecord{trial.trial_id, trial.attack_id, trial.bonafide, s};
  });
  return scores;
}

void write_train_log(const std::vector<EpochLog>& log, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) raise(ErrorCode::IoFailure, "cannot open " + path.string());
  out << "epoch,lr,mean_loss\n";
  char line[128];
  for (const auto& e : log) {
    std::snprintf(line, sizeof(line), "%d,%.9g,%.9g\n", e.epoch, e.lr, e.mean_loss);
    out << line;
  }
}

}  // namespace antispoof::train
