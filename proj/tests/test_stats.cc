// tests/test_stats.cc
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "antispoof/stats.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "antispoof/selftest.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using antispoof::ErrorCode;
using antispoof::Rng;
using namespace antispoof::stats;
namespace th = test_helpers;

TEST_CASE("z statistic: identity, symmetry, worked value") {
  CHECK(z_statistic(0.1, 0.1, 1000, 9000) == 0.0);
  CHECK(z_statistic(0.0, 0.0, 10, 10) == 0.0);  // equal EERs short-circuit
  CHECK(z_statistic(0.03, 0.08, 500, 4000) ==
        doctest::Approx(z_statistic(0.08, 0.03, 500, 4000)).epsilon(1e-15));
  // frozen from a high-precision evaluation of the formula
  CHECK(z_statistic(0.0192, 0.05, 1000, 9000) ==
        doctest::Approx(7.175340516573773).epsilon(1e-12));
  CHECK(th::caught_code([] { z_statistic(0.0, 1.0, 100, 100); }) ==
        ErrorCode::DegenerateVariance);
  CHECK(th::caught_code([] { z_statistic(0.2, 0.3, 0, 100); }) == ErrorCode::OutOfRange);
}

TEST_CASE("z statistic grows with the EER gap") {
  double prev = 0.0;
  for (double gap = 0.01; gap < 0.3; gap += 0.01) {
    const double z = z_statistic(0.2, 0.2 + gap, 2000, 2000);
    CHECK(z > prev);
    prev = z;
  }
}

TEST_CASE("normal quantile: symmetry, round trip, reference value") {
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  for (double p : {0.01, 0.12, 0.3, 0.47}) {
    CHECK(normal_quantile(p) == doctest::Approx(-normal_quantile(1.0 - p)).epsilon(1e-10));
  }
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959964).epsilon(1e-5));
  for (double p = 1e-6; p < 1.0; p += 0.0317) {
    CHECK(std::abs(normal_cdf(normal_quantile(p)) - p) < 1e-10);
  }
  CHECK(std::abs(normal_cdf(normal_quantile(1e-6)) - 1e-6) < 1e-10);
  CHECK(std::abs(normal_cdf(normal_quantile(1.0 - 1e-6)) - (1.0 - 1e-6)) < 1e-10);
  CHECK(th::caught_code([] { normal_quantile(0.0); }) == ErrorCode::OutOfRange);
  CHECK(th::caught_code([] { normal_quantile(1.0); }) == ErrorCode::OutOfRange);
}

TEST_CASE("normal cdf agrees with an independent series expansion") {
  for (double z = -8.0; z <= 8.0; z += 0.13) {
    CHECK(std::abs(normal_cdf(z) - antispoof::verify::series_normal_cdf(z)) < 1e-14);
  }
}

TEST_CASE("holm-bonferroni worked examples") {
  CHECK(holm_bonferroni(std::vector<double>{0.01}, 0.05) == std::vector<bool>{true});
  CHECK(holm_bonferroni(std::vector<double>{0.9, 0.9, 0.9}, 0.05) ==
        std::vector<bool>{false, false, false});
  // thresholds 0.05/3, 0.05/2, 0.05: reject, reject, fail
  CHECK(holm_bonferroni(std::vector<double>{0.01, 0.02, 0.2}, 0.05) ==
        std::vector<bool>{true, true, false});
  // the step-down stop blocks later small p-values once one fails
  CHECK(holm_bonferroni(std::vector<double>{0.04, 0.04, 0.04}, 0.05) ==
        std::vector<bool>{false, false, false});
}

TEST_CASE("holm-bonferroni matches the reference and is monotone") {
  Rng rng(81);
  for (int rep = 0; rep < 300; ++rep) {
    const int m = 1 + static_cast<int>(rng.uniform_int(0, 49));
    std::vector<double> p(static_cast<std::size_t>(m));
    for (double& x : p) x = rng.uniform(0.0, 1.0);
    const auto mine = holm_bonferroni(p, 0.05);
    CHECK(mine == antispoof::verify::reference_holm(p, 0.05));

    // Holm never rejects more than the uncorrected test
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (mine[i]) CHECK(p[i] <= 0.05);
    }

    // lowering one p-value never un-rejects anything else
    if (m >= 2) {
      std::vector<double> lowered = p;
      lowered[0] = 0.0;
      const auto after = holm_bonferroni(lowered, 0.05);
      for (std::size_t i = 1; i < p.size(); ++i) {
        if (mine[i]) CHECK(after[i]);
      }
    }
  }
}

TEST_CASE("significance matrix: identical observations never reject") {
  std::vector<EerObservation> obs = {{"m", 1, 0.05, 1000, 9000},
                                     {"m", 2, 0.05, 1000, 9000}};
  const auto matrix = significance_matrix(obs, 0.05);
  CHECK(matrix.z(0, 1) == 0.0);
  CHECK(matrix.reject[0][1] == false);
  CHECK(matrix.reject[0][0] == false);
  CHECK(matrix.reject[1][1] == false);
}

TEST_CASE("significance matrix: outlier pairs are exactly the rejections") {
  std::vector<EerObservation> obs = {{"a", 1, 0.010, 2000, 2000},
                                     {"a", 2, 0.011, 2000, 2000},
                                     {"b", 1, 0.200, 2000, 2000}};
  const auto matrix = significance_matrix(obs, 0.05);
  // near pair insignificant, both outlier pairs significant
  CHECK(matrix.reject[0][1] == false);
  CHECK(matrix.reject[0][2] == true);
  CHECK(matrix.reject[1][2] == true);
  // symmetry and diagonal
  for (int i = 0; i < 3; ++i) {
    CHECK(matrix.reject[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] == false);
    for (int j = 0; j < 3; ++j) {
      CHECK(matrix.z(i, j) == matrix.z(j, i));
      CHECK(matrix.p(i, j) == matrix.p(j, i));
      CHECK(matrix.reject[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ==
            matrix.reject[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
    }
  }

  // shared-count precondition
  std::vector<EerObservation> bad = obs;
  bad[2].n_bona = 777;
  CHECK(th::caught_code([&] { significance_matrix(bad, 0.05); }) ==
        ErrorCode::TrialMismatch);
}

TEST_CASE("pgm rendering is a valid binary heatmap") {
  const auto dir = th::scratch_dir("pgm");
  std::vector<EerObservation> obs = {{"a", 1, 0.010, 2000, 2000},
                                     {"a", 2, 0.011, 2000, 2000},
                                     {"b", 1, 0.200, 2000, 2000}};
  const auto matrix = significance_matrix(obs, 0.05);
  write_pgm(matrix, dir / "m.pgm", 4);

  std::ifstream in(dir / "m.pgm");
  std::string magic;
  int width = 0, height = 0, maxval = 0;
  in >> magic >> width >> height >> maxval;
  CHECK(magic == "P2");
  CHECK(width == 12);
  CHECK(height == 12);
  CHECK(maxval == 255);
  int count = 0, pixel = 0;
  bool saw_dark = false, saw_white = false;
  while (in >> pixel) {
    CHECK((pixel == 80 || pixel == 255));
    saw_dark = saw_dark || pixel == 80;
    saw_white = saw_white || pixel == 255;
    ++count;
  }
  CHECK(count == 144);
  CHECK(saw_dark);
  CHECK(saw_white);

  const std::string json = to_json_string(matrix);
  CHECK(json.find("\"reject\"") != std::string::npos);
  CHECK(json.find("\"alpha_level\"") != std::string::npos);
}
