// include/antispoof/fileio.hpp
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef ANTISPOOF_FILEIO_HPP_
#define ANTISPOOF_FILEIO_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "antispoof/metrics.hpp"
#include "antispoof/training.hpp"

namespace antispoof::fileio {

struct TrialRecord {
  std::string speaker_id;
  std::string trial_id;
  std::string attack_id;  // "-" for bonafide
  bool bonafide = false;
};

// Five whitespace-separated columns per line:
//   speaker trial - attack_or_dash key
// key is "bonafide" (attack must be "-") or "spoof". Duplicate trial ids
// are rejected.
std::vector<TrialRecord> parse_protocol(const std::filesystem::path& path);

// Score exchange format: "trial_id attack_id key score", single spaces,
// score printed with six significant digits, LF endings.
metrics::ScoreSet read_scores(const std::filesystem::path& path);
void write_scores(const metrics::ScoreSet& scores, const std::filesystem::path& path);

struct SyntheticRunConfig {
  train::SyntheticConfig base;
  int n_eval_per_class = 100;
  std::uint64_t data_seed = 1234;
  std::uint64_t eval_seed = 777;
};

struct ToolkitConfig {
  frontend::FrontendConfig frontend;
  model::BackendConfig backend;
  loss::LossConfig loss;
  train::TrainRunConfig train_run;
  SyntheticRunConfig synthetic;
  metrics::TdcfCostModel tdcf;
  double alpha_level = 0.05;
};

ToolkitConfig default_config();
ToolkitConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ToolkitConfig& cfg);

// Conv-stack input width implied by the frontend and compression choice.
int wire_input_dim(const ToolkitConfig& cfg);

}  // namespace antispoof::fileio

#endif  // ANTISPOOF_FILEIO_HPP_
