// include/antispoof/metrics.hpp
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef ANTISPOOF_METRICS_HPP_
#define ANTISPOOF_METRICS_HPP_

#include <map>
#include <string>
#include <vector>

#include "antispoof/mat.hpp"

namespace antispoof::metrics {

struct ScoreRecord {
  std::string trial_id;
  std::string attack_id;  // "-" for bonafide
  bool bonafide = false;
  double score = 0.0;  // higher = more bonafide
};

using ScoreSet = std::vector<ScoreRecord>;

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
};

// Threshold sweep over all distinct scores (accept iff score >= t) plus
// the reject-all point. FRR is the rejected bonafide fraction, FAR the
// accepted spoof fraction; the EER is the midpoint of (FRR + FAR)/2 at
// the two operating points bracketing the sign change of FRR - FAR, and
// the threshold is the midpoint of the bracketing scores. Honest systems
// land in [0, 0.5]; an inverted scorer reports its raw crossing value.
EerResult compute_eer(const ScoreSet& scores);

// Tandem cost in the legacy two-coefficient form
//   t-DCF(t) = C1 * Pmiss_cm(t) + C2 * Pfa_cm(t)
// with
//   C1 = p_tar * (c_miss_cm - c_miss_asv * p_miss_asv)
//        - p_non * c_fa_asv * p_fa_asv
//   C2 = c_fa_cm * p_spoof * (1 - p_miss_spoof_asv)
// normalized by min(C1, C2) and minimized over CM thresholds. The prior
// and cost defaults below are the published ASVspoof 2019 LA evaluation
// constants; the ASV rates are operating-point inputs with no canonical
// default and must come from the ASV system under test.
struct TdcfCostModel {
  double p_tar = 0.9405;
  double p_non = 0.0095;
  double p_spoof = 0.05;
  double c_miss_asv = 1.0;
  double c_fa_asv = 10.0;
  double c_miss_cm = 1.0;
  double c_fa_cm = 10.0;
  double p_fa_asv = 0.01;
  double p_miss_asv = 0.01;
  double p_miss_spoof_asv = 0.05;
  void validate() const;
};

double compute_min_tdcf(const ScoreSet& scores, const TdcfCostModel& cost);

// EER per attack over (all bonafide) + (that attack's spoofs), plus the
// pooled EER under key "pooled".
std::map<std::string, double> per_attack_breakdown(const ScoreSet& scores);

// Per-trial arithmetic mean across sets covering identical trials.
ScoreSet fuse_scores(const std::vector<ScoreSet>& sets);

struct EvalReport {
  double eer = 0.0;
  double eer_threshold = 0.0;
  double min_tdcf = 0.0;
  std::map<std::string, double> per_attack;
  int n_bona = 0;
  int n_spoof = 0;
};

EvalReport evaluate(const ScoreSet& scores, const TdcfCostModel& cost);

}  // namespace antispoof::metrics

#endif  // ANTISPOOF_METRICS_HPP_
