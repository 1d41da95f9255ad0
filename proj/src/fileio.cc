// src/fileio.cc
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "antispoof/fileio.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace antispoof::fileio {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string field;
  while (in >> field) fields.push_back(field);
  return fields;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

[[noreturn]] void malformed(const std::filesystem::path& path, int line_no,
                            const std::string& why) {
  raise(ErrorCode::MalformedLine,
        path.string() + ":" + std::to_string(line_no) + ": " + why);
}

}  // namespace

std::vector<TrialRecord> parse_protocol(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::IoFailure, "cannot open " + path.string());
  std::vector<TrialRecord> records;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 5) malformed(path, line_no, "expected 5 columns");
    TrialRecord rec;
    rec.speaker_id = fields[0];
    rec.trial_id = fields[1];
    rec.attack_id = fields[3];
    if (fields[4] == "bonafide") {
      rec.bonafide = true;
      if (rec.attack_id != "-") malformed(path, line_no, "bonafide trial with attack id");
    } else if (fields[4] == "spoof") {
      rec.bonafide = false;
      if (rec.attack_id == "-") malformed(path, line_no, "spoof trial without attack id");
    } else {
      malformed(path, line_no, "key must be bonafide or spoof");
    }
    if (!seen.insert(rec.trial_id).second) {
      raise(ErrorCode::DuplicateTrial, "duplicate trial id " + rec.trial_id);
    }
    records.push_back(std::move(rec));
  }
  return records;
}

metrics::ScoreSet read_scores(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::IoFailure, "cannot open " + path.string());
  metrics::ScoreSet scores;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 4) malformed(path, line_no, "expected 4 columns");
    metrics::ScoreRecord rec;
    rec.trial_id = fields[0];
    rec.attack_id = fields[1];
    if (fields[2] == "bonafide") {
      rec.bonafide = true;
    } else if (fields[2] == "spoof") {
      rec.bonafide = false;
    } else {
      malformed(path, line_no, "key must be bonafide or spoof");
    }
    try {
      std::size_t used = 0;
      rec.score = std::stod(fields[3], &used);
      if (used != fields[3].size()) throw std::invalid_argument(fields[3]);
    } catch (const std::exception&) {
      raise(ErrorCode::NonNumericScore,
            path.string() + ":" + std::to_string(line_no) + ": bad score " + fields[3]);
    }
    scores.push_back(std::move(rec));
  }
  return scores;
}

void write_scores(const metrics::ScoreSet& scores, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);  // force LF
  if (!out) raise(ErrorCode::IoFailure, "cannot open " + path.string());
  char line[256];
  for (const auto& rec : scores) {
    std::snprintf(line, sizeof(line), "%s %s %s %.6g\n", rec.trial_id.c_str(),
                  rec.attack_id.c_str(), rec.bonafide ? "bonafide" : "spoof", rec.score);
    out << line;
  }
  if (!out) raise(ErrorCode::IoFailure, "write failed for " + path.string());
}

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& known,
                const std::string& section) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (known.find(key) == known.end()) {
      raise(ErrorCode::ConfigError, "unknown key \"" + key + "\" in " + section);
    }
  }
}

frontend::FrontendKind parse_frontend_kind(const std::string& s) {
  if (s == "SPEC") return frontend::FrontendKind::Spec;
  if (s == "LFB") return frontend::FrontendKind::Lfb;
  if (s == "LFCC") return frontend::FrontendKind::Lfcc;
  raise(ErrorCode::ConfigError, "frontend kind must be SPEC, LFB or LFCC");
}

std::string frontend_kind_name(frontend::FrontendKind k) {
  switch (k) {
    case frontend::FrontendKind::Spec: return "SPEC";
    case frontend::FrontendKind::Lfb: return "LFB";
    case frontend::FrontendKind::Lfcc: return "LFCC";
  }
  return "?";
}

model::Strategy parse_strategy(const std::string& s) {
  if (s == "TrimPad") return model::Strategy::TrimPad;
  if (s == "Chunked") return model::Strategy::Chunked;
  if (s == "PoolMean") return model::Strategy::PoolMean;
  if (s == "PoolAttention") return model::Strategy::PoolAttention;
  raise(ErrorCode::ConfigError, "unknown backend strategy " + s);
}

std::string strategy_name(model::Strategy s) {
  switch (s) {
    case model::Strategy::TrimPad: return "TrimPad";
    case model::Strategy::Chunked: return "Chunked";
    case model::Strategy::PoolMean: return "PoolMean";
    case model::Strategy::PoolAttention: return "PoolAttention";
  }
  return "?";
}

loss::LossKind parse_loss_kind(const std::string& s) {
  if (s == "CE_SOFTMAX") return loss::LossKind::CeSoftmax;
  if (s == "CE_SIGMOID") return loss::LossKind::CeSigmoid;
  if (s == "AM_SOFTMAX") return loss::LossKind::AmSoftmax;
  if (s == "OC_SOFTMAX") return loss::LossKind::OcSoftmax;
  if (s == "P2SGRAD") return loss::LossKind::P2SGrad;
  raise(ErrorCode::ConfigError, "unknown loss kind " + s);
}

std::string loss_kind_name(loss::LossKind k) {
  switch (k) {
    case loss::LossKind::CeSoftmax: return "CE_SOFTMAX";
    case loss::LossKind::CeSigmoid: return "CE_SIGMOID";
    case loss::LossKind::AmSoftmax: return "AM_SOFTMAX";
    case loss::LossKind::OcSoftmax: return "OC_SOFTMAX";
    case loss::LossKind::P2SGrad: return "P2SGRAD";
  }
  return "?";
}

template <class T>
void get_if_present(const json& obj, const char* key, T& value) {
  if (obj.contains(key)) value = obj.at(key).get<T>();
}

}  // namespace

ToolkitConfig default_config() { return ToolkitConfig{}; }

ToolkitConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::IoFailure, "cannot open " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    raise(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
  check_keys(doc, {"frontend", "backend", "loss", "train", "tdcf", "alpha_level"},
             "config");

  ToolkitConfig cfg;
  if (doc.contains("frontend")) {
    const json& f = doc["frontend"];
    check_keys(f,
               {"sample_rate", "frame_len_ms", "frame_shift_ms", "nfft", "kind",
                "lfb_channels", "lfcc_channels", "lfcc_ceps", "delta_window",
                "log_floor", "window"},
               "frontend");
    get_if_present(f, "sample_rate", cfg.frontend.sample_rate);
    get_if_present(f, "frame_len_ms", cfg.frontend.frame_len_ms);
    get_if_present(f, "frame_shift_ms", cfg.frontend.frame_shift_ms);
    get_if_present(f, "nfft", cfg.frontend.nfft);
    if (f.contains("kind")) cfg.frontend.kind = parse_frontend_kind(f["kind"]);
    get_if_present(f, "lfb_channels", cfg.frontend.lfb_channels);
    get_if_present(f, "lfcc_channels", cfg.frontend.lfcc_channels);
    get_if_present(f, "lfcc_ceps", cfg.frontend.lfcc_ceps);
    get_if_present(f, "delta_window", cfg.frontend.delta_window);
    get_if_present(f, "log_floor", cfg.frontend.log_floor);
    if (f.contains("window")) {
      const std::string w = f["window"].get<std::string>();
      if (w == "hann") {
        cfg.frontend.window = frontend::WindowKind::Hann;
      } else if (w == "rect") {
        cfg.frontend.window = frontend::WindowKind::Rect;
      } else {
        raise(ErrorCode::ConfigError, "window must be hann or rect");
      }
    }
    cfg.frontend.validate();
  }
  // Spectrogram input is compressed to the filterbank width in front of
  // the conv stack unless the backend section says otherwise.
  if (cfg.frontend.kind == frontend::FrontendKind::Spec) {
    cfg.backend.compress_input = true;
  }

  if (doc.contains("backend")) {
    const json& b = doc["backend"];
    check_keys(b,
               {"strategy", "trim_frames", "chunk_frames", "chunk_shift",
                "conv_channels", "hidden_dim", "compress_input", "compress_dim",
                "use_recurrent", "attention_dim", "head_dim"},
               "backend");
    if (b.contains("strategy")) cfg.backend.strategy = parse_strategy(b["strategy"]);
    get_if_present(b, "trim_frames", cfg.backend.trim_frames);
    get_if_present(b, "chunk_frames", cfg.backend.chunk_frames);
    get_if_present(b, "chunk_shift", cfg.backend.chunk_shift);
    get_if_present(b, "conv_channels", cfg.backend.conv_channels);
    get_if_present(b, "hidden_dim", cfg.backend.hidden_dim);
    get_if_present(b, "compress_input", cfg.backend.compress_input);
    get_if_present(b, "compress_dim", cfg.backend.compress_dim);
    get_if_present(b, "use_recurrent", cfg.backend.use_recurrent);
    get_if_present(b, "attention_dim", cfg.backend.attention_dim);
    get_if_present(b, "head_dim", cfg.backend.head_dim);
  }

  if (doc.contains("loss")) {
    const json& l = doc["loss"];
    check_keys(l, {"preset", "kind", "alpha", "m1", "m2", "m3", "oc_variant"}, "loss");
    if (l.contains("preset")) cfg.loss = loss::LossConfig::preset(l["preset"].get<std::string>());
    if (l.contains("kind")) cfg.loss.kind = parse_loss_kind(l["kind"]);
    get_if_present(l, "alpha", cfg.loss.alpha);
    get_if_present(l, "m1", cfg.loss.m1);
    get_if_present(l, "m2", cfg.loss.m2);
    if (l.contains("m3")) cfg.loss.m3 = l["m3"].get<std::vector<double>>();
    if (l.contains("oc_variant")) {
      const std::string v = l["oc_variant"].get<std::string>();
      if (v == "all") {
        cfg.loss.oc_variant = loss::OcVariant::AllClasses;
      } else if (v == "target") {
        cfg.loss.oc_variant = loss::OcVariant::TargetOnly;
      } else {
        raise(ErrorCode::ConfigError, "oc_variant must be all or target");
      }
    }
    cfg.loss.validate();
  }

  if (doc.contains("train")) {
    const json& t = doc["train"];
    check_keys(t,
               {"seed", "batch_size", "epochs", "lr", "synthetic"},
               "train");
    get_if_present(t, "seed", cfg.train_run.seed);
    get_if_present(t, "batch_size", cfg.train_run.batch_size);
    get_if_present(t, "epochs", cfg.train_run.epochs);
    get_if_present(t, "lr", cfg.train_run.lr0);
    if (t.contains("synthetic")) {
      const json& s = t["synthetic"];
      check_keys(s,
                 {"n_train_per_class", "n_eval_per_class", "sample_rate",
                  "min_duration_s", "max_duration_s", "data_seed", "eval_seed"},
                 "train.synthetic");
      get_if_present(s, "n_train_per_class", cfg.synthetic.base.n_per_class);
      get_if_present(s, "n_eval_per_class", cfg.synthetic.n_eval_per_class);
      get_if_present(s, "sample_rate", cfg.synthetic.base.sample_rate);
      get_if_present(s, "min_duration_s", cfg.synthetic.base.min_duration_s);
      get_if_present(s, "max_duration_s", cfg.synthetic.base.max_duration_s);
      get_if_present(s, "data_seed", cfg.synthetic.data_seed);
      get_if_present(s, "eval_seed", cfg.synthetic.eval_seed);
    }
  }

  if (doc.contains("tdcf")) {
    const json& t = doc["tdcf"];
    check_keys(t,
               {"p_tar", "p_non", "p_spoof", "c_miss_asv", "c_fa_asv", "c_miss_cm",
                "c_fa_cm", "p_fa_asv", "p_miss_asv", "p_miss_spoof_asv"},
               "tdcf");
    get_if_present(t, "p_tar", cfg.tdcf.p_tar);
    get_if_present(t, "p_non", cfg.tdcf.p_non);
    get_if_present(t, "p_spoof", cfg.tdcf.p_spoof);
    get_if_present(t, "c_miss_asv", cfg.tdcf.c_miss_asv);
    get_if_present(t, "c_fa_asv", cfg.tdcf.c_fa_asv);
    get_if_present(t, "c_miss_cm", cfg.tdcf.c_miss_cm);
    get_if_present(t, "c_fa_cm", cfg.tdcf.c_fa_cm);
    get_if_present(t, "p_fa_asv", cfg.tdcf.p_fa_asv);
    get_if_present(t, "p_miss_asv", cfg.tdcf.p_miss_asv);
    get_if_present(t, "p_miss_spoof_asv", cfg.tdcf.p_miss_spoof_asv);
    cfg.tdcf.validate();
  }

  get_if_present(doc, "alpha_level", cfg.alpha_level);

  cfg.backend.input_dim = cfg.frontend.feature_dim();
  if (cfg.frontend.kind == frontend::FrontendKind::Spec && !cfg.backend.compress_input) {
    raise(ErrorCode::ConfigError, "SPEC frontend requires backend.compress_input");
  }
  cfg.backend.validate(cfg.loss);
  return cfg;
}

int wire_input_dim(const ToolkitConfig& cfg) {
  return cfg.backend.compress_input ? cfg.backend.compress_dim
                                    : cfg.frontend.feature_dim();
}

std::string config_to_json(const ToolkitConfig& cfg) {
  json doc;
  doc["frontend"] = {{"sample_rate", cfg.frontend.sample_rate},
                     {"frame_len_ms", cfg.frontend.frame_len_ms},
                     {"frame_shift_ms", cfg.frontend.frame_shift_ms},
                     {"nfft", cfg.frontend.nfft},
                     {"kind", frontend_kind_name(cfg.frontend.kind)},
                     {"lfb_channels", cfg.frontend.lfb_channels},
                     {"lfcc_channels", cfg.frontend.lfcc_channels},
                     {"lfcc_ceps", cfg.frontend.lfcc_ceps},
                     {"delta_window", cfg.frontend.delta_window},
                     {"log_floor", cfg.frontend.log_floor},
                     {"window",
                      cfg.frontend.window == frontend::WindowKind::Hann ? "hann" : "rect"}};
  doc["backend"] = {{"strategy", strategy_name(cfg.backend.strategy)},
                    {"trim_frames", cfg.backend.trim_frames},
                    {"chunk_frames", cfg.backend.chunk_frames},
                    {"chunk_shift", cfg.backend.chunk_shift},
                    {"conv_channels", cfg.backend.conv_channels},
                    {"hidden_dim", cfg.backend.hidden_dim},
                    {"compress_input", cfg.backend.compress_input},
                    {"compress_dim", cfg.backend.compress_dim},
                    {"use_recurrent", cfg.backend.use_recurrent},
                    {"attention_dim", cfg.backend.attention_dim},
                    {"head_dim", cfg.backend.head_dim}};
  doc["loss"] = {{"kind", loss_kind_name(cfg.loss.kind)},
                 {"alpha", cfg.loss.alpha},
                 {"m1", cfg.loss.m1},
                 {"m2", cfg.loss.m2},
                 {"m3", cfg.loss.m3},
                 {"oc_variant",
                  cfg.loss.oc_variant == loss::OcVariant::AllClasses ? "all" : "target"}};
  doc["train"] = {{"seed", cfg.train_run.seed},
                  {"batch_size", cfg.train_run.batch_size},
                  {"epochs", cfg.train_run.epochs},
                  {"lr", cfg.train_run.lr0},
                  {"synthetic",
                   {{"n_train_per_class", cfg.synthetic.base.n_per_class},
                    {"n_eval_per_class", cfg.synthetic.n_eval_per_class},
                    {"sample_rate", cfg.synthetic.base.sample_rate},
                    {"min_duration_s", cfg.synthetic.base.min_duration_s},
                    {"max_duration_s", cfg.synthetic.base.max_duration_s},
                    {"data_seed", cfg.synthetic.data_seed},
                    {"eval_seed", cfg.synthetic.eval_seed}}}};
  doc["tdcf"] = {{"p_tar", cfg.tdcf.p_tar},
                 {"p_non", cfg.tdcf.p_non},
                 {"p_spoof", cfg.tdcf.p_spoof},
                 {"c_miss_asv", cfg.tdcf.c_miss_asv},
                 {"c_fa_asv", cfg.tdcf.c_fa_asv},
                 {"c_miss_cm", cfg.tdcf.c_miss_cm},
                 {"c_fa_cm", cfg.tdcf.c_fa_cm},
                 {"p_fa_asv", cfg.tdcf.p_fa_asv},
                 {"p_miss_asv", cfg.tdcf.p_miss_asv},
                 {"p_miss_spoof_asv", cfg.tdcf.p_miss_spoof_asv}};
  doc["alpha_level"] = cfg.alpha_level;
  return doc.dump(2) + "\n";
}

}  // namespace antispoof::fileio
