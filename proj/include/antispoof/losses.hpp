// include/antispoof/losses.hpp
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef ANTISPOOF_LOSSES_HPP_
#define ANTISPOOF_LOSSES_HPP_

#include <span>
#include <string_view>
#include <vector>

#include "antispoof/nn.hpp"

namespace antispoof::loss {

enum class LossKind { CeSoftmax, CeSigmoid, AmSoftmax, OcSoftmax, P2SGrad };

// Which logits the per-class margin m3_k is subtracted from in the
// one-class softmax. AllClasses subtracts each class's own margin from
// its own logit on every trial; TargetOnly applies only the target
// class's margin, like the additive-margin form.
enum class OcVariant { AllClasses, TargetOnly };

// Class convention throughout: y = 1 bonafide, y = 2 spoof.
struct LossConfig {
  LossKind kind = LossKind::P2SGrad;
  double alpha = 20.0;
  double m1 = 1.0;
  double m2 = 0.0;
  std::vector<double> m3 = {0.9, 0.9};
  OcVariant oc_variant = OcVariant::AllClasses;
  int num_classes = 2;

  // "ce", "am", "oc", "sigmoid", "p2sgrad"
  static LossConfig preset(std::string_view name);
  bool uses_cosine_head() const { return kind != LossKind::CeSigmoid; }
  void validate() const;
};

// Margin softmax over cosine logits:
//   target logit     alpha * (cos(m1*theta_y + m2) - m3_y)
//   non-target logit alpha * cos(theta_i), minus m3_i for the OC
//                    AllClasses variant
// The arccos path is bypassed when (m1, m2) = (1, 0).
std::vector<double> margin_softmax_probs(std::span<const double> cosines, int y,
                                         const LossConfig& cfg);

double cross_entropy(std::span<const double> probs, int y);

// sum_k (cos(theta_k) - [y == k])^2
double p2sgrad_mse(std::span<const double> cosines, int y);

// Binary cross entropy through 1/(1 + exp(-logit)) in overflow-safe form.
double sigmoid_binary_loss(double logit, int y);

// ---- tape attachment ----

struct HeadOutputs {
  nn::VarId loss = -1;     // -1 when built for inference only (y == 0)
  nn::VarId cosines = -1;  // 1 x C, cosine heads only
  nn::VarId logit = -1;    // 1 x 1, sigmoid head only
  double score = 0.0;      // inference score of this trial
};

// Builds the score head on top of an utterance embedding and, when y is
// 1 or 2, the training loss. Cosine-based heads apply the head.proj
// dense layer first; the sigmoid head consumes the embedding directly.
HeadOutputs attach_head(nn::Tape& tape, nn::VarId embedding, int y,
                        const LossConfig& cfg, const nn::BoundParams& bound);

// Score for one trial: P(bonafide) for the sigmoid head, cos(theta_1)
// otherwise. Higher means more bonafide.
double inference_score(const HeadOutputs& outputs, const nn::Tape& tape,
                       const LossConfig& cfg);

}  // namespace antispoof::loss

#endif  // ANTISPOOF_LOSSES_HPP_
