// src/losses.cc
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "antispoof/losses.hpp"

#include <algorithm>
#include <cmath>

namespace antispoof::loss {

namespace {

constexpr double kProbFloor = 1e-30;
constexpr double kCosineTolerance = 1e-12;
constexpr double kAcosClampEps = 1e-12;

void check_cosines(std::span<const double> cosines) {
  for (double c : cosines) {
    if (!std::isfinite(c) || std::abs(c) > 1.0 + kCosineTolerance) {
      raise(ErrorCode::InvalidCosine, "cosine outside [-1, 1]");
    }
  }
}

void check_target(int y, int n_classes) {
  if (y < 1 || y > n_classes) raise(ErrorCode::ConfigError, "target class out of range");
}

// Per-class margins subtracted inside the softmax, as a dense vector.
std::vector<double> effective_margins(int n_classes, int y, const LossConfig& cfg) {
  std::vector<double> m(static_cast<std::size_t>(n_classes), 0.0);
  auto m3_at = [&](int k) {
    if (cfg.m3.empty()) return 0.0;
    return cfg.m3[static_cast<std::size_t>(std::min<int>(k, static_cast<int>(cfg.m3.size()) - 1))];
  };
  switch (cfg.kind) {
    case LossKind::CeSoftmax:
      break;
    case LossKind::AmSoftmax:
      m[static_cast<std::size_t>(y - 1)] = m3_at(y - 1);
      break;
    case LossKind::OcSoftmax:
      if (cfg.oc_variant == OcVariant::AllClasses) {
        for (int k = 0; k < n_classes; ++k) m[static_cast<std::size_t>(k)] = m3_at(k);
      } else {
        m[static_cast<std::size_t>(y - 1)] = m3_at(y - 1);
      }
      break;
    default:
      raise(ErrorCode::ConfigError, "not a margin-softmax loss");
  }
  return m;
}

bool margin_warp_active(const LossConfig& cfg) {
  return cfg.m1 != 1.0 || cfg.m2 != 0.0;
}

}  // namespace

LossConfig LossConfig::preset(std::string_view name) {
  LossConfig cfg;
  if (name == "ce") {
    cfg.kind = LossKind::CeSoftmax;
    cfg.alpha = 20.0;
    cfg.m3 = {0.0, 0.0};
  } else if (name == "am") {
    cfg.kind = LossKind::AmSoftmax;
    cfg.alpha = 20.0;
    cfg.m3 = {0.9, 0.9};
  } else if (name == "oc") {
    cfg.kind = LossKind::OcSoftmax;
    cfg.alpha = 20.0;
    cfg.m3 = {0.9, 0.2};
  } else if (name == "sigmoid") {
    cfg.kind = LossKind::CeSigmoid;
  } else if (name == "p2sgrad") {
    cfg.kind = LossKind::P2SGrad;  // no hyper-parameters
  } else {
    raise(ErrorCode::ConfigError, "unknown loss preset: " + std::string(name));
  }
  return cfg;
}

void LossConfig::validate() const {
  if (num_classes < 2) raise(ErrorCode::ConfigError, "need at least two classes");
  if (alpha <= 0.0) raise(ErrorCode::ConfigError, "alpha must be positive");
  if (m1 < 1.0) raise(ErrorCode::ConfigError, "m1 must be >= 1");
  if (m2 < 0.0) raise(ErrorCode::ConfigError, "m2 must be >= 0");
}

std::vector<double> margin_softmax_probs(std::span<const double> cosines, int y,
                                         const LossConfig& cfg) {
  check_cosines(cosines);
  const int n = static_cast<int>(cosines.size());
  check_target(y, n);
  const auto margins = effective_margins(n, y, cfg);

  std::vector<double> logits(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    double psi = std::min(1.0, std::max(-1.0, cosines[static_cast<std::size_t>(k)]));
    if (k == y - 1 && margin_warp_active(cfg)) {
      const double c = std::min(1.0 - kAcosClampEps, std::max(-(1.0 - kAcosClampEps), psi));
      psi = std::cos(cfg.m1 * std::acos(c) + cfg.m2);
    }
    logits[static_cast<std::size_t>(k)] =
        cfg.alpha * (psi - margins[static_cast<std::size_t>(k)]);
  }

  double mx = logits[0];
  for (double l : logits) mx = std::max(mx, l);
  double z = 0.0;
  for (double l : logits) z += std::exp(l - mx);
  std::vector<double> probs(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    probs[static_cast<std::size_t>(k)] = std::exp(logits[static_cast<std::size_t>(k)] - mx) / z;
  }
  return probs;
}

double cross_entropy(std::span<const double> probs, int y) {
  check_target(y, static_cast<int>(probs.size()));
  return -std::log(std::max(kProbFloor, probs[static_cast<std::size_t>(y - 1)]));
}

double p2sgrad_mse(std::span<const double> cosines, int y) {
  check_cosines(cosines);
  check_target(y, static_cast<int>(cosines.size()));
  double acc = 0.0;
  for (int k = 0; k < static_cast<int>(cosines.size()); ++k) {
    const double target = k == y - 1 ? 1.0 : 0.0;
    const double d = cosines[static_cast<std::size_t>(k)] - target;
    acc += d * d;
  }
  return acc;
}

double sigmoid_binary_loss(double logit, int y) {
  // -log sigmoid(z) = softplus(-z); -log(1 - sigmoid(z)) = softplus(z)
  const double z = y == 1 ? -logit : logit;
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

HeadOutputs attach_head(nn::Tape& tape, nn::VarId embedding, int y,
                        const LossConfig& cfg, const nn::BoundParams& bound) {
  if (y != 0) check_target(y, cfg.num_classes);
  HeadOutputs out;

  if (cfg.kind == LossKind::CeSigmoid) {
    const nn::VarId z =
        tape.add(tape.matmul(embedding, bound.id("head.w")), bound.id("head.b"));
    out.logit = z;
    out.score = 1.0 / (1.0 + std::exp(-tape.value(z)(0, 0)));
    if (y != 0) {
      out.loss = y == 1 ? tape.softplus(tape.scale(z, -1.0)) : tape.softplus(z);
    }
    return out;
  }

  // Cosine heads share a projection layer in front of the class weights.
  const nn::VarId projected = tape.add_rowvec(
      tape.matmul(embedding, bound.id("head.proj.w")), bound.id("head.proj.b"));
  const nn::VarId unit = tape.normalize_rows(projected);
  const nn::VarId classes = tape.normalize_rows(bound.id("head.class_w"));
  const nn::VarId cosines = tape.matmul(unit, tape.transpose(classes));  // 1 x C
  out.cosines = cosines;
  out.score = std::min(1.0, std::max(-1.0, tape.value(cosines)(0, 0)));
  if (y == 0) return out;

  if (cfg.kind == LossKind::P2SGrad) {
    Mat onehot(1, cfg.num_classes);
    onehot(0, y - 1) = 1.0;
    out.loss = tape.sum(tape.square(tape.sub(cosines, tape.constant(onehot))));
    return out;
  }

  // Margin softmax with cross entropy.
  const auto margins = effective_margins(cfg.num_classes, y, cfg);
  nn::VarId modified = cosines;
  if (margin_warp_active(cfg)) {
    const nn::VarId theta = tape.acos_clamped(cosines, kAcosClampEps);
    const nn::VarId warped = tape.cos(tape.affine(theta, cfg.m1, cfg.m2));
    Mat mask(1, cfg.num_classes);
    mask(0, y - 1) = 1.0;
    const nn::VarId delta = tape.mul(tape.sub(warped, cosines), tape.constant(mask));
    modified = tape.add(cosines, delta);
  }
  Mat margin_row(1, cfg.num_classes);
  for (int k = 0; k < cfg.num_classes; ++k) margin_row(0, k) = margins[static_cast<std::size_t>(k)];
  const nn::VarId logits =
      tape.scale(tape.sub(modified, tape.constant(margin_row)), cfg.alpha);
  const nn::VarId logp = tape.log_softmax_row(logits);
  out.loss = tape.scale(tape.pick(logp, 0, y - 1), -1.0);
  return out;
}

double inference_score(const HeadOutputs& outputs, const nn::Tape& tape,
                       const LossConfig& cfg) {
  if (cfg.kind == LossKind::CeSigmoid) {
    return 1.0 / (1.0 + std::exp(-tape.value(outputs.logit)(0, 0)));
  }
  return std::min(1.0, std::max(-1.0, tape.value(outputs.cosines)(0, 0)));
}

}  // namespace antispoof::loss
