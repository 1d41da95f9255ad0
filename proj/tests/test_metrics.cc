// tests/test_metrics.cc
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "antispoof/metrics.hpp"

#include <cmath>

#include "antispoof/selftest.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using antispoof::ErrorCode;
using antispoof::Rng;
using namespace antispoof::metrics;
namespace th = test_helpers;

namespace {

ScoreSet make_set(const std::vector<double>& bona, const std::vector<double>& spoof) {
  ScoreSet set;
  for (std::size_t i = 0; i < bona.size(); ++i) {
    set.push_back({"b" + std::to_string(i), "-", true, bona[i]});
  }
  for (std::size_t i = 0; i < spoof.size(); ++i) {
    set.push_back({"s" + std::to_string(i), "A01", false, spoof[i]});
  }
  return set;
}

ScoreSet random_set(Rng& rng, int max_each) {
  ScoreSet set;
  const int nb = 1 + static_cast<int>(rng.uniform_int(0, max_each - 1));
  const int ns = 1 + static_cast<int>(rng.uniform_int(0, max_each - 1));
  for (int i = 0; i < nb; ++i) {
    set.push_back({"b" + std::to_string(i), "-", true, rng.uniform(-1.0, 2.0)});
  }
  for (int i = 0; i < ns; ++i) {
    set.push_back({"s" + std::to_string(i), "A0" + std::to_string(1 + i % 3), false,
                   rng.uniform(-2.0, 1.0)});
  }
  return set;
}

}  // namespace

TEST_CASE("compute_eer on worked examples") {
  CHECK(compute_eer(make_set({0.9, 0.8}, {0.2, 0.1})).eer == 0.0);
  CHECK(compute_eer(make_set({0.9, 0.8, 0.3}, {0.7, 0.2, 0.1})).eer ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  // swapped labels with negated scores give the same crossing
  ScoreSet swapped;
  for (const auto& r : make_set({0.9, 0.8, 0.3}, {0.7, 0.2, 0.1})) {
    swapped.push_back({r.trial_id, r.bonafide ? "A01" : "-", !r.bonafide, -r.score});
  }
  CHECK(compute_eer(swapped).eer == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  CHECK(th::caught_code([] { compute_eer(make_set({0.5}, {})); }) ==
        ErrorCode::SingleClass);
}

TEST_CASE("compute_eer matches the brute-force sweep oracle") {
  Rng rng(71);
  for (int rep = 0; rep < 300; ++rep) {
    const auto set = random_set(rng, 60);
    const auto fast = compute_eer(set);
    const auto ref = antispoof::verify::brute_force_eer(set);
    CHECK(std::abs(fast.eer - ref.eer) < 1e-9);
    CHECK(std::abs(fast.threshold - ref.threshold) < 1e-9);
  }
}

TEST_CASE("compute_eer is invariant under strictly increasing transforms") {
  Rng rng(72);
  for (int rep = 0; rep < 50; ++rep) {
    const auto set = random_set(rng, 40);
    const double base = compute_eer(set).eer;
    const double a = rng.uniform(0.2, 3.0);
    const double b = rng.uniform(0.1, 2.0);
    const double c = rng.uniform(-1.0, 1.0);
    ScoreSet mapped = set;
    for (auto& r : mapped) r.score = c + a * r.score + b * r.score * r.score * r.score;
    CHECK(compute_eer(mapped).eer == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("min t-dcf basics") {
  const TdcfCostModel cost;

  CHECK(compute_min_tdcf(make_set({0.9, 0.8}, {0.2, 0.1}), cost) == 0.0);

  // a constant scorer can only accept everything or reject everything;
  // the cheaper extreme normalizes to exactly 1
  CHECK(compute_min_tdcf(make_set({0.5, 0.5}, {0.5, 0.5}), cost) == 1.0);

  // toy cost model with C1 = C2 = 1: min over thresholds of Pmiss + Pfa
  TdcfCostModel unit;
  unit.p_tar = 0.5;
  unit.p_non = 0.0;
  unit.p_spoof = 0.5;
  unit.c_miss_cm = 2.0;
  unit.c_fa_cm = 2.0;
  unit.c_miss_asv = 1.0;
  unit.c_fa_asv = 1.0;
  unit.p_fa_asv = 0.0;
  unit.p_miss_asv = 0.0;
  unit.p_miss_spoof_asv = 0.0;
  CHECK(compute_min_tdcf(make_set({0.9, 0.8, 0.3}, {0.7, 0.2, 0.1}), unit) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  // published LA constants with example ASV rates on the same toy set
  CHECK(compute_min_tdcf(make_set({0.9, 0.8, 0.3}, {0.7, 0.2, 0.1}), cost) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("min t-dcf matches the reference sweep on random sets") {
  Rng rng(73);
  const TdcfCostModel cost;
  for (int rep = 0; rep < 300; ++rep) {
    const auto set = random_set(rng, 60);
    CHECK(std::abs(compute_min_tdcf(set, cost) -
                   antispoof::verify::reference_min_tdcf(set, cost)) < 1e-12);
  }
}

TEST_CASE("min t-dcf is invariant under monotone transforms and flags degenerate costs") {
  Rng rng(74);
  const TdcfCostModel cost;
  const auto set = random_set(rng, 40);
  const double base = compute_min_tdcf(set, cost);
  ScoreSet mapped = set;
  for (auto& r : mapped) r.score = std::tanh(r.score) * 3.0 + 0.1;
  CHECK(compute_min_tdcf(mapped, cost) == doctest::Approx(base).epsilon(1e-12));

  TdcfCostModel bad = cost;
  bad.p_miss_asv = 1.0;  // drives C1 below zero
  CHECK(th::caught_code([&] { compute_min_tdcf(set, bad); }) == ErrorCode::DegenerateCost);

  TdcfCostModel invalid = cost;
  invalid.p_tar = 0.5;  // priors no longer sum to one
  CHECK(th::caught_code([&] { compute_min_tdcf(set, invalid); }) ==
        ErrorCode::DegenerateCost);
}

TEST_CASE("per-attack breakdown") {
  // single attack: breakdown equals pooled
  const auto single = make_set({0.9, 0.4}, {0.6, 0.2});
  const auto breakdown = per_attack_breakdown(single);
  CHECK(breakdown.at("A01") == doctest::Approx(breakdown.at("pooled")).epsilon(1e-15));

  // one separable attack, one fully overlapping attack
  ScoreSet two;
  two.push_back({"b0", "-", true, 0.8});
  two.push_back({"b1", "-", true, 0.9});
  two.push_back({"b2", "-", true, 0.7});
  two.push_back({"s0", "A07", false, 0.1});  // far below all bonafide
  two.push_back({"s1", "A07", false, 0.2});
  two.push_back({"s2", "A08", false, 0.8});  // tied with the bonafide range
  two.push_back({"s3", "A08", false, 0.9});
  two.push_back({"s4", "A08", false, 0.7});
  const auto by = per_attack_breakdown(two);
  CHECK(by.at("A07") == 0.0);
  CHECK(by.at("A08") == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(by.at("pooled") > 0.0);
  CHECK(by.at("pooled") < 0.5);
}

TEST_CASE("fuse_scores") {
  const auto set = make_set({0.9, 0.4}, {0.6, 0.2});
  const auto identity = fuse_scores({set});
  REQUIRE(identity.size() == set.size());
  for (std::size_t i = 0; i < set.size(); ++i) CHECK(identity[i].score == set[i].score);

  const auto tripled = fuse_scores({set, set, set});
  for (std::size_t i = 0; i < set.size(); ++i) {
    CHECK(tripled[i].score == doctest::Approx(set[i].score).epsilon(1e-15));
  }
  CHECK(compute_eer(tripled).eer == compute_eer(set).eer);

  ScoreSet shifted = set;
  for (auto& r : shifted) r.score = r.score == 0.9 ? 0.1 : r.score;
  const auto fused = fuse_scores({set, shifted});
  CHECK(fused[0].score == doctest::Approx(0.5).epsilon(1e-12));

  // order independence
  Rng rng(75);
  ScoreSet other = set;
  for (auto& r : other) r.score = rng.uniform(0.0, 1.0);
  const auto ab = fuse_scores({set, other});
  const auto ba = fuse_scores({other, set});
  for (std::size_t i = 0; i < ab.size(); ++i) {
    CHECK(ab[i].score == doctest::Approx(ba[i].score).epsilon(1e-15));
  }

  ScoreSet missing = set;
  missing.pop_back();
  CHECK(th::caught_code([&] { fuse_scores({set, missing}); }) == ErrorCode::TrialMismatch);
}

TEST_CASE("evaluate assembles a full report") {
  const auto set = make_set({0.9, 0.8, 0.3}, {0.7, 0.2, 0.1});
  const auto report = evaluate(set, TdcfCostModel{});
  CHECK(report.eer == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(report.min_tdcf == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(report.n_bona == 3);
  CHECK(report.n_spoof == 3);
  CHECK(report.per_attack.count("A01") == 1);
  CHECK(report.per_attack.count("pooled") == 1);
}
