// include/antispoof/selftest.hpp
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Independent reference implementations used to verify the fast paths.
// Everything here recomputes its answer from first principles (direct
// sums, exhaustive sweeps, series expansions) and must not call into the
// implementation it checks.

#ifndef ANTISPOOF_SELFTEST_HPP_
#define ANTISPOOF_SELFTEST_HPP_

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "antispoof/backend.hpp"
#include "antispoof/metrics.hpp"

namespace antispoof::verify {

// O(n^2) DFT of a real frame, all nfft bins.
std::vector<std::complex<double>> naive_dft(std::span<const double> x, int nfft);

// O(m^2) orthonormal DCT-II with explicit cosine sums.
std::vector<double> naive_dct_ii(std::span<const double> v, int n_out);

// EER by evaluating FRR/FAR just below and above every distinct score
// (accept iff score >= t) plus the reject-all point, then applying the
// midpoint rule at the sign change of FRR - FAR. O(n^2).
metrics::EerResult brute_force_eer(const metrics::ScoreSet& scores);

// Reference tandem cost: per-trial mergesort sweep with cumulative
// sums, mirroring the published evaluation routine's arithmetic.
double reference_min_tdcf(const metrics::ScoreSet& scores,
                          const metrics::TdcfCostModel& cost);

// Standard normal CDF from a long-double Taylor series of erf (plus an
// asymptotic tail), good to ~1e-16 absolute.
double series_normal_cdf(double z);

// Literal step-down reference for the Holm correction.
std::vector<bool> reference_holm(std::span<const double> p_values, double alpha_level);

// One full-model gradient check: random small back end + loss head,
// finite differences over every parameter and input coordinate.
struct GradCheckResult {
  double max_rel_err = 0.0;
  int coords = 0;
};
GradCheckResult gradient_check_instance(loss::LossKind kind, model::Strategy strategy,
                                        bool use_recurrent, std::uint64_t seed);

// Counts instances where the negative MSE-loss gradient fails to have
// positive inner product with d cos(theta_y)/d o, over random
// embeddings and class weights of the given width.
int p2sgrad_direction_violations(int n_instances, int dim, std::uint64_t seed);

// Named quick checks behind the `selftest` subcommand; prints one line
// per check, returns false if any failed.
bool run_selftests(bool verbose);

}  // namespace antispoof::verify

#endif  // ANTISPOOF_SELFTEST_HPP_
