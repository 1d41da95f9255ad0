// src/stats.cc
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "antispoof/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "json.hpp"

namespace antispoof::stats {

double z_statistic(double eer_a, double eer_b, std::int64_t n_bona,
                   std::int64_t n_spoof) {
  if (n_bona <= 0 || n_spoof <= 0) raise(ErrorCode::OutOfRange, "counts must be positive");
  for (double e : {eer_a, eer_b}) {
    if (!(e >= 0.0 && e <= 1.0)) raise(ErrorCode::OutOfRange, "EER must be in [0, 1]");
  }
  if (eer_a == eer_b) return 0.0;
  const double variance = (eer_a * (1.0 - eer_a) + eer_b * (1.0 - eer_b)) *
                          (static_cast<double>(n_bona) + static_cast<double>(n_spoof)) /
                          (static_cast<double>(n_bona) * static_cast<double>(n_spoof));
  if (variance <= 0.0) {
    raise(ErrorCode::DegenerateVariance, "z denominator vanishes");
  }
  return 2.0 * std::abs(eer_a - eer_b) / std::sqrt(variance);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) raise(ErrorCode::OutOfRange, "p must be in (0, 1)");
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) < p ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 4; ++i) {  // Newton polish on cdf(x) - p
    const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    if (pdf <= 0.0) break;
    x -= (normal_cdf(x) - p) / pdf;
  }
  return x;
}

std::vector<bool> holm_bonferroni(std::span<const double> p_values, double alpha_level) {
  const std::size_t m = p_values.size();
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) raise(ErrorCode::OutOfRange, "p-value must be in [0, 1]");
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });
  std::vector<bool> reject(m, false);
  for (std::size_t k = 0; k < m; ++k) {
    const double threshold = alpha_level / static_cast<double>(m - k);
    if (p_values[order[k]] <= threshold) {
      reject[order[k]] = true;
    } else {
      break;  // step-down stops at the first failure
    }
  }
  return reject;
}

SignificanceMatrix significance_matrix(std::span<const EerObservation> observations,
                                       double alpha_level) {
  const std::size_t n = observations.size();
  if (n < 2) raise(ErrorCode::OutOfRange, "need at least two observations");
  for (const auto& o : observations) {
    if (o.n_bona != observations[0].n_bona || o.n_spoof != observations[0].n_spoof) {
      raise(ErrorCode::TrialMismatch, "observations must share trial counts");
    }
  }

  SignificanceMatrix out;
  out.alpha_level = alpha_level;
  out.z = Mat(static_cast<int>(n), static_cast<int>(n));
  out.p = Mat(static_cast<int>(n), static_cast<int>(n));
  out.reject.assign(n, std::vector<bool>(n, false));
  for (const auto& o : observations) {
    out.labels.push_back(o.model_id + ":" + std::to_string(o.run_index));
    out.eers.push_back(o.eer);
  }
  for (std::size_t i = 0; i < n; ++i) out.p(static_cast<int>(i), static_cast<int>(i)) = 1.0;

  std::vector<double> pair_p;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double z = z_statistic(observations[i].eer, observations[j].eer,
                                   observations[i].n_bona, observations[i].n_spoof);
      const double p = 2.0 * (1.0 - normal_cdf(z));
      out.z(static_cast<int>(i), static_cast<int>(j)) = z;
      out.z(static_cast<int>(j), static_cast<int>(i)) = z;
      out.p(static_cast<int>(i), static_cast<int>(j)) = p;
      out.p(static_cast<int>(j), static_cast<int>(i)) = p;
      pair_p.push_back(p);
      pairs.emplace_back(i, j);
    }
  }
  // All unordered pairs form one correction family.
  const auto flags = holm_bonferroni(pair_p, alpha_level);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    out.reject[pairs[k].first][pairs[k].second] = flags[k];
    out.reject[pairs[k].second][pairs[k].first] = flags[k];
  }
  return out;
}

void write_pgm(const SignificanceMatrix& matrix, const std::filesystem::path& path,
               int cell_px) {
  if (cell_px < 1) raise(ErrorCode::OutOfRange, "cell_px must be >= 1");
  const int n = matrix.z.rows();
  const int side = n * cell_px;
  std::ofstream out(path, std::ios::trunc);
  if (!out) raise(ErrorCode::IoFailure, "cannot open " + path.string());
  out << "P2\n" << side << " " << side << "\n255\n";
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const int value = matrix.reject[static_cast<std::size_t>(y / cell_px)]
                                     [static_cast<std::size_t>(x / cell_px)]
                            ? 80
                            : 255;
      out << value << (x + 1 == side ? "" : " ");
    }
    out << "\n";
  }
  if (!out) raise(ErrorCode::IoFailure, "write failed for " + path.string());
}

std::string to_json_string(const SignificanceMatrix& matrix) {
  nlohmann::json doc;
  doc["alpha_level"] = matrix.alpha_level;
  doc["labels"] = matrix.labels;
  doc["eers"] = matrix.eers;
  const int n = matrix.z.rows();
  auto mat_to_json = [&](const Mat& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < n; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int j = 0; j < n; ++j) row.push_back(m(i, j));
      rows.push_back(row);
    }
    return rows;
  };
  doc["z"] = mat_to_json(matrix.z);
  doc["p"] = mat_to_json(matrix.p);
  nlohmann::json rej = nlohmann::json::array();
  for (const auto& row : matrix.reject) {
    nlohmann::json r = nlohmann::json::array();
    for (bool b : row) r.push_back(b);
    rej.push_back(r);
  }
  doc["reject"] = rej;
  return doc.dump(2) + "\n";
}

}  // namespace antispoof::stats
