// src/cli.cc
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "antispoof/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "antispoof/fileio.hpp"
#include "antispoof/selftest.hpp"
#include "antispoof/stats.hpp"
#include "json.hpp"

namespace antispoof::cli {

namespace {

namespace fs = std::filesystem;

fileio::ToolkitConfig load_config_or_default(const std::string& path) {
  if (path.empty()) return fileio::default_config();
  return fileio::load_config(path);
}

// Features for one protocol trial: a cached .fmat next to the audio wins,
// otherwise the .wav is extracted on the fly.
Mat load_trial_features(const fs::path& dir, const std::string& trial_id,
                        const frontend::FrontendConfig& cfg) {
  const fs::path cached = dir / (trial_id + ".fmat");
  if (fs::exists(cached)) return audio::read_feature_cache(cached);
  const fs::path wav = dir / (trial_id + ".wav");
  if (!fs::exists(wav)) {
    raise(ErrorCode::IoFailure, "no " + trial_id + ".fmat or .wav under " + dir.string());
  }
  return frontend::extract_features(audio::read_wav(wav), cfg);
}

std::vector<train::Trial> load_protocol_trials(const fs::path& protocol,
                                               const fs::path& wav_dir,
                                               const frontend::FrontendConfig& cfg) {
  const auto records = fileio::parse_protocol(protocol);
  std::vector<train::Trial> trials(records.size());
  par::for_each_index(static_cast<int>(records.size()), [&](int i) {
    const auto idx = static_cast<std::size_t>(i);
    trials[idx].trial_id = records[idx].trial_id;
    trials[idx].attack_id = records[idx].attack_id;
    trials[idx].bonafide = records[idx].bonafide;
    trials[idx].features = load_trial_features(wav_dir, records[idx].trial_id, cfg);
  });
  return trials;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) raise(ErrorCode::IoFailure, "cannot open " + path.string());
  out << text;
}

nlohmann::json param_counts_json(const nn::ParamStore& params) {
  nlohmann::json counts;
  for (const auto& item : params.items()) {
    counts[item.name] = item.value.size();
  }
  counts["total"] = params.total_size();
  return counts;
}

int cmd_extract(const std::string& config_path, const fs::path& protocol,
                const fs::path& wav_dir, const fs::path& out_dir) {
  const auto cfg = load_config_or_default(config_path);
  const auto records = fileio::parse_protocol(protocol);
  fs::create_directories(out_dir);
  par::for_each_index(static_cast<int>(records.size()), [&](int i) {
    const auto& rec = records[static_cast<std::size_t>(i)];
    const Mat features =
        frontend::extract_features(audio::read_wav(wav_dir / (rec.trial_id + ".wav")),
                                   cfg.frontend);
    audio::write_feature_cache(features, out_dir / (rec.trial_id + ".fmat"));
  });
  std::printf("extracted %zu trials to %s\n", records.size(), out_dir.string().c_str());
  return 0;
}

std::uint64_t run_seed(int run_index, int total_runs, std::uint64_t single_seed) {
  if (total_runs == 1) return single_seed;
  std::uint64_t seed = 1;  // run k uses 10^(k-1)
  for (int i = 0; i < run_index; ++i) seed *= 10;
  return seed;
}

int cmd_train(const std::string& config_path, const fs::path& out_dir, int runs,
              std::optional<std::uint64_t> seed_flag, const std::string& protocol,
              const std::string& wav_dir) {
  auto cfg = load_config_or_default(config_path);
  cfg.backend.input_dim = cfg.frontend.feature_dim();
  if (seed_flag.has_value()) {
    if (runs > 1) {
      raise(ErrorCode::UsageError, "--seed conflicts with --runs; seeds are 10^(k-1)");
    }
    cfg.train_run.seed = *seed_flag;
  }

  const bool synthetic_mode = protocol.empty();
  std::vector<train::Trial> train_trials, eval_trials;
  if (synthetic_mode) {
    train::SyntheticConfig train_synth = cfg.synthetic.base;
    train::SyntheticConfig eval_synth = cfg.synthetic.base;
    eval_synth.n_per_class = cfg.synthetic.n_eval_per_class;
    train_trials = train::extract_trials(
        train::generate_synthetic_dataset(cfg.synthetic.data_seed, train_synth),
        cfg.frontend);
    eval_trials = train::extract_trials(
        train::generate_synthetic_dataset(cfg.synthetic.data_seed + 1, eval_synth),
        cfg.frontend);
  } else {
    if (wav_dir.empty()) raise(ErrorCode::UsageError, "--protocol requires --wav-dir");
    train_trials = load_protocol_trials(protocol, wav_dir, cfg.frontend);
  }

  fs::create_directories(out_dir);
  for (int k = 0; k < runs; ++k) {
    train::TrainRunConfig run_cfg = cfg.train_run;
    run_cfg.seed = run_seed(k, runs, cfg.train_run.seed);
    const fs::path run_dir = out_dir / ("run_" + std::to_string(k + 1));
    fs::create_directories(run_dir);

    const auto result = train::train_model(train_trials, cfg.backend, cfg.loss, run_cfg);
    result.params.save(run_dir / "params.bin", run_dir / "params.json");
    train::write_train_log(result.log, run_dir / "train_log.csv");

    nlohmann::json info;
    info["seed"] = run_cfg.seed;
    info["epochs"] = run_cfg.epochs;
    info["batch_size"] = run_cfg.batch_size;
    info["final_mean_loss"] = result.log.back().mean_loss;
    info["param_counts"] = param_counts_json(result.params);
    if (synthetic_mode) {
      info["eval_seed"] = cfg.synthetic.eval_seed;
      const auto scores = train::score_trials(eval_trials, result.params, cfg.backend,
                                              cfg.loss, cfg.synthetic.eval_seed);
      fileio::write_scores(scores, run_dir / "scores.txt");
      info["eval_eer"] = metrics::compute_eer(scores).eer;
    }
    write_text(run_dir / "run_info.json", info.dump(2) + "\n");
    std::printf("run %d/%d: seed %llu, final loss %.6g\n", k + 1, runs,
                static_cast<unsigned long long>(run_cfg.seed),
                result.log.back().mean_loss);
  }
  return 0;
}

int cmd_score(const std::string& config_path, const fs::path& params_dir,
              const fs::path& protocol, const fs::path& wav_dir, const fs::path& out,
              std::uint64_t eval_seed) {
  const auto cfg = load_config_or_default(config_path);
  const auto params = nn::ParamStore::load(params_dir / "params.bin",
                                           params_dir / "params.json");
  const auto trials = load_protocol_trials(protocol, wav_dir, cfg.frontend);
  const auto scores = train::score_trials(trials, params, cfg.backend, cfg.loss, eval_seed);
  fileio::write_scores(scores, out);
  std::printf("scored %zu trials (eval seed %llu) -> %s\n", scores.size(),
              static_cast<unsigned long long>(eval_seed), out.string().c_str());
  return 0;
}

int cmd_eval(const std::string& config_path, const fs::path& score_path,
             const fs::path& out) {
  const auto cfg = load_config_or_default(config_path);
  const auto scores = fileio::read_scores(score_path);
  const auto report = metrics::evaluate(scores, cfg.tdcf);
  if (report.eer > 0.5) {
    std::fprintf(stderr,
                 "warning: EER %.4f exceeds 0.5; the scorer looks inverted, raw value "
                 "reported\n",
                 report.eer);
  }
  nlohmann::json doc;
  doc["eer"] = report.eer;
  doc["eer_threshold"] = report.eer_threshold;
  doc["min_tdcf"] = report.min_tdcf;
  doc["per_attack"] = report.per_attack;
  doc["counts"] = {{"bonafide", report.n_bona}, {"spoof", report.n_spoof}};
  const std::string text = doc.dump(2) + "\n";
  if (out.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    write_text(out, text);
  }
  return 0;
}

int cmd_compare(const std::string& config_path, const std::vector<std::string>& score_paths,
                const std::string& out_prefix, std::optional<double> alpha,
                std::optional<std::int64_t> n_bona, std::optional<std::int64_t> n_spoof) {
  const auto cfg = load_config_or_default(config_path);
  std::vector<stats::EerObservation> observations;
  for (std::size_t i = 0; i < score_paths.size(); ++i) {
    const auto scores = fileio::read_scores(score_paths[i]);
    std::int64_t nb = 0, ns = 0;
    for (const auto& r : scores) (r.bonafide ? nb : ns) += 1;
    stats::EerObservation obs;
    obs.model_id = fs::path(score_paths[i]).stem().string();
    obs.run_index = static_cast<int>(i) + 1;
    obs.eer = metrics::compute_eer(scores).eer;
    obs.n_bona = n_bona.value_or(nb);
    obs.n_spoof = n_spoof.value_or(ns);
    observations.push_back(std::move(obs));
  }
  const auto matrix =
      stats::significance_matrix(observations, alpha.value_or(cfg.alpha_level));
  write_text(fs::path(out_prefix + ".json"), stats::to_json_string(matrix));
  stats::write_pgm(matrix, out_prefix + ".pgm");
  double lo = observations[0].eer, hi = observations[0].eer;
  for (const auto& o : observations) {
    lo = std::min(lo, o.eer);
    hi = std::max(hi, o.eer);
  }
  std::printf("compared %zu score files; EER range [%.4f, %.4f], spread %.4f\n",
              observations.size(), lo, hi, hi - lo);
  std::printf("wrote %s.json and %s.pgm\n", out_prefix.c_str(), out_prefix.c_str());
  return 0;
}

int cmd_fuse(const std::vector<std::string>& score_paths, const fs::path& out) {
  std::vector<metrics::ScoreSet> sets;
  sets.reserve(score_paths.size());
  for (const auto& p : score_paths) sets.push_back(fileio::read_scores(p));
  fileio::write_scores(metrics::fuse_scores(sets), out);
  std::printf("fused %zu score files -> %s\n", sets.size(), out.string().c_str());
  return 0;
}

}  // namespace

int run_subcommand(int argc, const char* const* argv) {
  CLI::App app{"speech anti-spoofing countermeasure toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // allow --config after the subcommand name

  std::string config_path;
  app.add_option("--config", config_path, "toolkit JSON config")->capture_default_str();

  auto* extract = app.add_subcommand("extract", "write feature caches for a protocol");
  std::string ex_protocol, ex_wav_dir, ex_out;
  extract->add_option("--protocol", ex_protocol)->required();
  extract->add_option("--wav-dir", ex_wav_dir)->required();
  extract->add_option("--out", ex_out)->required();

  auto* train_cmd = app.add_subcommand("train", "train one or more runs");
  std::string tr_out = "runs", tr_protocol, tr_wav_dir;
  int tr_runs = 1;
  std::optional<std::uint64_t> tr_seed;
  train_cmd->add_option("--out", tr_out);
  train_cmd->add_option("--runs", tr_runs)->check(CLI::PositiveNumber);
  train_cmd->add_option("--seed", tr_seed);
  train_cmd->add_option("--protocol", tr_protocol);
  train_cmd->add_option("--wav-dir", tr_wav_dir);

  auto* score = app.add_subcommand("score", "score a protocol with trained parameters");
  std::string sc_params, sc_protocol, sc_wav_dir, sc_out;
  std::uint64_t sc_seed = 777;
  score->add_option("params_dir", sc_params, "directory with params.bin/params.json")
      ->required();
  score->add_option("--protocol", sc_protocol)->required();
  score->add_option("--wav-dir", sc_wav_dir)->required();
  score->add_option("--out", sc_out)->required();
  score->add_option("--seed", sc_seed, "evaluation seed for random trimming");

  auto* eval = app.add_subcommand("eval", "EER / min t-DCF report for a score file");
  std::string ev_scores, ev_out;
  eval->add_option("scores", ev_scores)->required();
  eval->add_option("--out", ev_out, "report path (stdout when omitted)");

  auto* compare = app.add_subcommand("compare", "pairwise significance tests");
  std::vector<std::string> cp_scores;
  std::string cp_out = "significance";
  std::optional<double> cp_alpha;
  std::optional<std::int64_t> cp_nbona, cp_nspoof;
  compare->add_option("scores", cp_scores, "two or more score files")->required();
  compare->add_option("--out", cp_out, "output prefix for .json/.pgm");
  compare->add_option("--alpha", cp_alpha, "significance level");
  compare->add_option("--n-bona", cp_nbona, "override bonafide trial count");
  compare->add_option("--n-spoof", cp_nspoof, "override spoof trial count");

  auto* fuse = app.add_subcommand("fuse", "average scores across systems");
  std::vector<std::string> fu_scores;
  std::string fu_out;
  fuse->add_option("scores", fu_scores)->required();
  fuse->add_option("--out", fu_out)->required();

  auto* selftest = app.add_subcommand("selftest", "gradient checks and oracle suites");
  bool st_quiet = false;
  selftest->add_flag("--quiet", st_quiet, "print failures only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*extract) return cmd_extract(config_path, ex_protocol, ex_wav_dir, ex_out);
    if (*train_cmd) {
      return cmd_train(config_path, tr_out, tr_runs, tr_seed, tr_protocol, tr_wav_dir);
    }
    if (*score) {
      return cmd_score(config_path, sc_params, sc_protocol, sc_wav_dir, sc_out, sc_seed);
    }
    if (*eval) return cmd_eval(config_path, ev_scores, ev_out);
    if (*compare) {
      if (cp_scores.size() < 2) {
        raise(ErrorCode::UsageError, "compare needs at least two score files");
      }
      return cmd_compare(config_path, cp_scores, cp_out, cp_alpha, cp_nbona, cp_nspoof);
    }
    if (*fuse) return cmd_fuse(fu_scores, fu_out);
    if (*selftest) return verify::run_selftests(!st_quiet) ? 0 : 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.code() == ErrorCode::UsageError ? 2 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}

}  // namespace antispoof::cli
