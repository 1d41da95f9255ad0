// include/antispoof/common.hpp
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef ANTISPOOF_COMMON_HPP_
#define ANTISPOOF_COMMON_HPP_

#include <cmath>
#include <cstdint>
#include <exception>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace antispoof {

enum class ErrorCode {
  // audio i/o
  NotWav,
  UnsupportedEncoding,
  TruncatedFile,
  BadMagic,
  ShapeMismatch,
  IoFailure,
  // frontend
  EmptySignal,
  FrameTooLong,
  TooManyFilters,
  // nn core
  ZeroVector,
  EmptySequence,
  OddWidth,
  NonFiniteLoss,
  InvalidCosine,
  // training
  NonFiniteGradient,
  DivergedLoss,
  // metrics
  SingleClass,
  DegenerateCost,
  TrialMismatch,
  // stats
  DegenerateVariance,
  OutOfRange,
  // file formats / cli
  MalformedLine,
  DuplicateTrial,
  NonNumericScore,
  UnknownOp,
  ConfigError,
  UsageError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

// Deterministic random source. std::mt19937_64 has a standardized output
// sequence, and every derived draw below is defined by explicit arithmetic
// on that sequence, so results are reproducible across platforms. The
// std::*_distribution adapters are implementation-defined and must not be
// used anywhere reproducibility matters.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [lo, hi). Consumes one engine draw.
  double uniform(double lo = 0.0, double hi = 1.0) {
    const double unit = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    return lo + unit * (hi - lo);
  }

  // Uniform integer in [lo, hi], inclusive. Consumes one engine draw.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(gen_() % span);
  }

  // Standard normal via Box-Muller, one value per call (two engine draws).
  double gaussian() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  // Fisher-Yates using uniform_int; consumes n-1 draws for n elements.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j =
          static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

namespace par {

// Process-wide switch between the OpenMP path and the serial reference
// path. Both paths execute the same per-index body and every index writes
// disjoint state, so they produce bit-identical results; the switch exists
// for the serial-vs-parallel equivalence tests and the benchmark tool.
bool enabled();
void set_enabled(bool on);

template <class F>
void for_each_index(int n, F&& body) {
  if (n <= 0) return;
  std::vector<std::exception_ptr> errors;
#ifdef _OPENMP
  if (enabled()) {
    errors.assign(static_cast<std::size_t>(n), nullptr);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    return;
  }
#endif
  for (int i = 0; i < n; ++i) body(i);
}

}  // namespace par
}  // namespace antispoof

#endif  // ANTISPOOF_COMMON_HPP_
