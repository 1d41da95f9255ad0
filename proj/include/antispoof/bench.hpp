// include/antispoof/bench.hpp
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef ANTISPOOF_BENCH_HPP_
#define ANTISPOOF_BENCH_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace antispoof::bench {

struct BenchRecord {
  std::string op;
  std::int64_t size = 0;        // input size in the op's natural unit
  std::int64_t median_ns = 0;   // median over repetitions, warm-up discarded
  double throughput = 0.0;      // units per second
};

// Registered operations, each with a serial and an OpenMP variant
// (suffixes ".serial" / ".parallel").
std::vector<std::string> registered_ops();

// Times one op at the given size: one discarded warm-up run, then
// `repetitions` timed runs, median reported. UnknownOp for unregistered
// names.
BenchRecord run_bench(const std::string& op, std::int64_t size, int repetitions);

std::string to_csv_line(const BenchRecord& record);

}  // namespace antispoof::bench

#endif  // ANTISPOOF_BENCH_HPP_
