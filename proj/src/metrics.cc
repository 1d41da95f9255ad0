// src/metrics.cc
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "antispoof/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace antispoof::metrics {

namespace {

struct OperatingPoint {
  double threshold;
  double frr;  // bonafide rejected (score < t)
  double far;  // spoof accepted (score >= t)
};

// Operating points at every distinct score, ascending, plus the
// reject-all point just above the maximum. The accept-all point is the
// sweep's first entry (t = min score).
std::vector<OperatingPoint> sweep_operating_points(const ScoreSet& scores) {
  std::vector<double> bona, spoof;
  for (const auto& r : scores) (r.bonafide ? bona : spoof).push_back(r.score);
  if (bona.empty() || spoof.empty()) {
    raise(ErrorCode::SingleClass, "need both bonafide and spoof scores");
  }
  std::sort(bona.begin(), bona.end());
  std::sort(spoof.begin(), spoof.end());

  std::vector<double> thresholds;
  thresholds.reserve(bona.size() + spoof.size());
  thresholds.insert(thresholds.end(), bona.begin(), bona.end());
  thresholds.insert(thresholds.end(), spoof.begin(), spoof.end());
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  const double nb = static_cast<double>(bona.size());
  const double ns = static_cast<double>(spoof.size());
  std::vector<OperatingPoint> points;
  points.reserve(thresholds.size() + 1);
  for (double t : thresholds) {
    const auto below_bona = std::lower_bound(bona.begin(), bona.end(), t) - bona.begin();
    const auto below_spoof = std::lower_bound(spoof.begin(), spoof.end(), t) - spoof.begin();
    points.push_back({t, static_cast<double>(below_bona) / nb,
                      (ns - static_cast<double>(below_spoof)) / ns});
  }
  const double top = std::nextafter(thresholds.back(), std::numeric_limits<double>::infinity());
  points.push_back({top, 1.0, 0.0});
  return points;
}

}  // namespace

EerResult compute_eer(const ScoreSet& scores) {
  const auto points = sweep_operating_points(scores);
  auto balance = [](const OperatingPoint& p) { return 0.5 * (p.frr + p.far); };
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double diff = points[i].frr - points[i].far;
    if (diff == 0.0) {
      return {balance(points[i]), points[i].threshold};
    }
    if (diff > 0.0) {
      // sign change between i-1 and i; the sweep starts at diff = -1, so
      // i > 0 here.
      const auto& lo = points[i - 1];
      const auto& hi = points[i];
      return {0.5 * (balance(lo) + balance(hi)), 0.5 * (lo.threshold + hi.threshold)};
    }
  }
  raise(ErrorCode::SingleClass, "threshold sweep found no crossing");
}

void TdcfCostModel::validate() const {
  const double prior_sum = p_tar + p_non + p_spoof;
  if (p_tar < 0 || p_non < 0 || p_spoof < 0 || std::abs(prior_sum - 1.0) > 1e-9) {
    raise(ErrorCode::DegenerateCost, "priors must be nonnegative and sum to 1");
  }
  if (c_miss_asv <= 0 || c_fa_asv <= 0 || c_miss_cm <= 0 || c_fa_cm <= 0) {
    raise(ErrorCode::DegenerateCost, "costs must be positive");
  }
  for (double r : {p_fa_asv, p_miss_asv, p_miss_spoof_asv}) {
    if (r < 0.0 || r > 1.0) raise(ErrorCode::DegenerateCost, "ASV rates must be in [0, 1]");
  }
}

double compute_min_tdcf(const ScoreSet& scores, const TdcfCostModel& cost) {
  cost.validate();
  const double c1 = cost.p_tar * (cost.c_miss_cm - cost.c_miss_asv * cost.p_miss_asv) -
                    cost.p_non * cost.c_fa_asv * cost.p_fa_asv;
  const double c2 = cost.c_fa_cm * cost.p_spoof * (1.0 - cost.p_miss_spoof_asv);
  if (c1 <= 0.0 || c2 <= 0.0) {
    raise(ErrorCode::DegenerateCost, "t-DCF coefficients must be positive");
  }
  const double norm = std::min(c1, c2);
  const auto points = sweep_operating_points(scores);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : points) {
    best = std::min(best, (c1 * p.frr + c2 * p.far) / norm);
  }
  return best;
}

std::map<std::string, double> per_attack_breakdown(const ScoreSet& scores) {
  std::map<std::string, ScoreSet> by_attack;
  ScoreSet bona;
  for (const auto& r : scores) {
    if (r.bonafide) {
      bona.push_back(r);
    } else {
      by_attack[r.attack_id].push_back(r);
    }
  }
  if (by_attack.empty()) raise(ErrorCode::SingleClass, "no spoof records");
  std::map<std::string, double> out;
  for (auto& [attack, records] : by_attack) {
    ScoreSet subset = bona;
    subset.insert(subset.end(), records.begin(), records.end());
    out[attack] = compute_eer(subset).eer;
  }
  out["pooled"] = compute_eer(scores).eer;
  return out;
}

ScoreSet fuse_scores(const std::vector<ScoreSet>& sets) {
  if (sets.empty()) raise(ErrorCode::TrialMismatch, "nothing to fuse");
  ScoreSet fused = sets.front();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < fused.size(); ++i) index[fused[i].trial_id] = i;
  for (std::size_t s = 1; s < sets.size(); ++s) {
    if (sets[s].size() != fused.size()) {
      raise(ErrorCode::TrialMismatch, "score sets cover different trials");
    }
    for (const auto& r : sets[s]) {
      const auto it = index.find(r.trial_id);
      if (it == index.end()) {
        raise(ErrorCode::TrialMismatch, "trial " + r.trial_id + " missing from first set");
      }
      auto& dst = fused[it->second];
      if (dst.bonafide != r.bonafide || dst.attack_id != r.attack_id) {
        raise(ErrorCode::TrialMismatch, "trial " + r.trial_id + " labeled inconsistently");
      }
      dst.score += r.score;
    }
  }
  const double inv = 1.0 / static_cast<double>(sets.size());
  for (auto& r : fused) r.score *= inv;
  return fused;
}

EvalReport evaluate(const ScoreSet& scores, const TdcfCostModel& cost) {
  EvalReport report;
  const auto eer = compute_eer(scores);
  report.eer = eer.eer;
  report.eer_threshold = eer.threshold;
  report.min_tdcf = compute_min_tdcf(scores, cost);
  report.per_attack = per_attack_breakdown(scores);
  for (const auto& r : scores) (r.bonafide ? report.n_bona : report.n_spoof) += 1;
  return report;
}

}  // namespace antispoof::metrics
