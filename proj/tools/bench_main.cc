// tools/bench_main.cc
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "antispoof/bench.hpp"

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP micro-benchmarks"};
  std::string op;
  long long size = 48000;  // 3 s at 16 kHz for the extraction ops
  int reps = 5;
  app.add_option("--op", op, "op name (default: run all registered ops)");
  app.add_option("--size", size, "input size in the op's natural unit");
  app.add_option("--reps", reps, "timed repetitions (median reported)")
      ->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  std::printf("op,size,median_ns,throughput\n");
  try {
    if (!op.empty()) {
      std::printf("%s\n", antispoof::bench::to_csv_line(
                              antispoof::bench::run_bench(op, size, reps)).c_str());
      return 0;
    }
    for (const auto& name : antispoof::bench::registered_ops()) {
      // matmul and batch_grad use their own natural sizes
      long long s = size;
      if (name.rfind("matmul", 0) == 0) s = 96;
      if (name.rfind("batch_grad", 0) == 0) s = 8;
      if (name.rfind("eer", 0) == 0) s = 20000;
      std::printf("%s\n",
                  antispoof::bench::to_csv_line(antispoof::bench::run_bench(name, s, reps))
                      .c_str());
      std::fflush(stdout);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
