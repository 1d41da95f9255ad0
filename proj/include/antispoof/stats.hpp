// include/antispoof/stats.hpp
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef ANTISPOOF_STATS_HPP_
#define ANTISPOOF_STATS_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "antispoof/mat.hpp"

namespace antispoof::stats {

// Pooled-variance two-proportion statistic comparing two EERs evaluated
// on the same trial counts:
//   z = 2|a - b| / sqrt([a(1-a) + b(1-b)] (Nb + Ns) / (Nb Ns))
// Equal EERs give exactly 0; a vanishing denominator with distinct EERs
// raises DegenerateVariance.
double z_statistic(double eer_a, double eer_b, std::int64_t n_bona,
                   std::int64_t n_spoof);

double normal_cdf(double z);
// Inverse standard normal CDF via bisection plus Newton polish;
// |cdf(result) - p| < 1e-10.
double normal_quantile(double p);

// Step-down correction: sort ascending, reject while p_(k) <= alpha/(m-k+1),
// stop at the first failure. Flags returned in the original order.
std::vector<bool> holm_bonferroni(std::span<const double> p_values, double alpha_level);

struct EerObservation {
  std::string model_id;
  int run_index = 0;
  double eer = 0.0;
  std::int64_t n_bona = 0;
  std::int64_t n_spoof = 0;
};

struct SignificanceMatrix {
  std::vector<std::string> labels;
  std::vector<double> eers;
  double alpha_level = 0.05;
  Mat z;
  Mat p;
  std::vector<std::vector<bool>> reject;
};

// Pairwise z tests over every unordered pair of observations (intra- and
// inter-model alike), two-sided p = 2(1 - cdf(z)), Holm-corrected as one
// family. Symmetric, diagonal false.
SignificanceMatrix significance_matrix(std::span<const EerObservation> observations,
                                       double alpha_level);

// Binary heatmap: dark cells are significant pairs, white insignificant.
void write_pgm(const SignificanceMatrix& matrix, const std::filesystem::path& path,
               int cell_px = 8);

std::string to_json_string(const SignificanceMatrix& matrix);

}  // namespace antispoof::stats

#endif  // ANTISPOOF_STATS_HPP_
