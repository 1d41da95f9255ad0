// src/nn.cc
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "antispoof/nn.hpp"

#include <cmath>
#include <fstream>

#include "antispoof/audio_io.hpp"
#include "json.hpp"

namespace antispoof::nn {

Mat& ParamStore::add(const std::string& name, Mat value) {
  if (has(name)) raise(ErrorCode::ConfigError, "duplicate parameter " + name);
  items_.push_back(NamedMat{name, std::move(value)});
  return items_.back().value;
}

Mat& ParamStore::get(const std::string& name) {
  const int i = index_of(name);
  if (i < 0) raise(ErrorCode::ConfigError, "unknown parameter " + name);
  return items_[static_cast<std::size_t>(i)].value;
}

const Mat& ParamStore::get(const std::string& name) const {
  const int i = index_of(name);
  if (i < 0) raise(ErrorCode::ConfigError, "unknown parameter " + name);
  return items_[static_cast<std::size_t>(i)].value;
}

bool ParamStore::has(const std::string& name) const { return index_of(name) >= 0; }

int ParamStore::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (items_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

std::size_t ParamStore::total_size() const {
  std::size_t n = 0;
  for (const auto& item : items_) n += item.value.size();
  return n;
}

void ParamStore::save(const std::filesystem::path& bin_path,
                      const std::filesystem::path& manifest_path) const {
  std::ofstream out(bin_path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorCode::IoFailure, "cannot open " + bin_path.string());
  nlohmann::json manifest;
  manifest["params"] = nlohmann::json::array();
  std::size_t offset = 0;
  for (const auto& item : items_) {
    const auto block = audio::encode_feature_block(item.value);
    out.write(reinterpret_cast<const char*>(block.data()),
              static_cast<std::streamsize>(block.size()));
    manifest["params"].push_back({{"name", item.name},
                                  {"rows", item.value.rows()},
                                  {"cols", item.value.cols()},
                                  {"offset", offset}});
    offset += block.size();
  }
  if (!out) raise(ErrorCode::IoFailure, "write failed for " + bin_path.string());
  std::ofstream mout(manifest_path, std::ios::trunc);
  if (!mout) raise(ErrorCode::IoFailure, "cannot open " + manifest_path.string());
  mout << manifest.dump(2) << "\n";
}

ParamStore ParamStore::load(const std::filesystem::path& bin_path,
                            const std::filesystem::path& manifest_path) {
  std::ifstream min(manifest_path);
  if (!min) raise(ErrorCode::IoFailure, "cannot open " + manifest_path.string());
  nlohmann::json manifest;
  try {
    min >> manifest;
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::ConfigError, std::string("bad manifest: ") + e.what());
  }
  std::ifstream bin(bin_path, std::ios::binary);
  if (!bin) raise(ErrorCode::IoFailure, "cannot open " + bin_path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(bin)),
                                   std::istreambuf_iterator<char>());
  ParamStore store;
  for (const auto& entry : manifest.at("params")) {
    const std::string name = entry.at("name").get<std::string>();
    const std::size_t offset = entry.at("offset").get<std::size_t>();
    const int rows = entry.at("rows").get<int>();
    const int cols = entry.at("cols").get<int>();
    const std::size_t block_size =
        12 + static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) * 4;
    if (offset + block_size > bytes.size()) {
      raise(ErrorCode::ShapeMismatch, "manifest offset past end of " + bin_path.string());
    }
    Mat m = audio::decode_feature_block(bytes.data() + offset, block_size);
    if (m.rows() != rows || m.cols() != cols) {
      raise(ErrorCode::ShapeMismatch, "manifest shape mismatch for " + name);
    }
    store.add(name, std::move(m));
  }
  return store;
}

GradBuffer::GradBuffer(const ParamStore& store) {
  grads.reserve(store.items().size());
  for (const auto& item : store.items()) {
    grads.emplace_back(item.value.rows(), item.value.cols());
  }
}

void GradBuffer::accumulate(const GradBuffer& other) {
  for (std::size_t i = 0; i < grads.size(); ++i) {
    for (std::size_t j = 0; j < grads[i].size(); ++j) {
      grads[i].data()[j] += other.grads[i].data()[j];
    }
  }
}

void GradBuffer::scale(double s) {
  for (auto& g : grads) {
    for (std::size_t j = 0; j < g.size(); ++j) g.data()[j] *= s;
  }
}

VarId BoundParams::id(const std::string& name) const {
  const int i = store->index_of(name);
  if (i < 0) raise(ErrorCode::ConfigError, "unbound parameter " + name);
  return ids[static_cast<std::size_t>(i)];
}

BoundParams bind_params(Tape& tape, const ParamStore& store) {
  BoundParams bound;
  bound.store = &store;
  bound.ids.reserve(store.items().size());
  for (const auto& item : store.items()) bound.ids.push_back(tape.input(item.value));
  return bound;
}

void collect_grads(const Tape& tape, const BoundParams& bound, GradBuffer& out) {
  for (std::size_t i = 0; i < bound.ids.size(); ++i) {
    const Mat g = tape.grad_of(bound.ids[i]);
    for (std::size_t j = 0; j < g.size(); ++j) out.grads[i].data()[j] += g.data()[j];
  }
}

std::vector<double> length_normalize(std::span<const double> v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  const double norm = std::sqrt(sq);
  if (norm == 0.0) raise(ErrorCode::ZeroVector, "cannot normalize a zero vector");
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x /= norm;
  return out;
}

std::vector<double> cosine_scores(std::span<const double> o, const Mat& class_weights) {
  const auto oh = length_normalize(o);
  if (class_weights.cols() != static_cast<int>(o.size())) {
    raise(ErrorCode::ShapeMismatch, "class weight width must match embedding");
  }
  std::vector<double> scores(static_cast<std::size_t>(class_weights.rows()));
  for (int k = 0; k < class_weights.rows(); ++k) {
    double sq = 0.0;
    for (int c = 0; c < class_weights.cols(); ++c) sq += class_weights(k, c) * class_weights(k, c);
    const double norm = std::sqrt(sq);
    if (norm == 0.0) raise(ErrorCode::ZeroVector, "zero class weight row");
    double dot = 0.0;
    for (int c = 0; c < class_weights.cols(); ++c) {
      dot += class_weights(k, c) / norm * oh[static_cast<std::size_t>(c)];
    }
    scores[static_cast<std::size_t>(k)] = std::min(1.0, std::max(-1.0, dot));
  }
  return scores;
}

std::vector<double> mean_pool(const Mat& hidden) {
  if (hidden.rows() < 1) raise(ErrorCode::EmptySequence, "mean_pool of empty sequence");
  std::vector<double> out(static_cast<std::size_t>(hidden.cols()), 0.0);
  for (int c = 0; c < hidden.cols(); ++c) {
    double acc = 0.0;
    for (int r = 0; r < hidden.rows(); ++r) acc += hidden(r, c);
    out[static_cast<std::size_t>(c)] = acc / hidden.rows();
  }
  return out;
}

AttentionResult attention_pool(const Mat& hidden, const AttentionParams& params) {
  if (hidden.rows() < 1) raise(ErrorCode::EmptySequence, "attention_pool of empty sequence");
  Tape tape;
  const VarId h = tape.constant(hidden);
  const VarId w = tape.constant(params.w);
  const VarId b = tape.constant(params.bias);
  const VarId u = tape.constant(params.u);
  VarId weights = -1;
  const VarId pooled = attention_pool_node(tape, h, w, b, u, &weights);
  AttentionResult result;
  const Mat& o = tape.value(pooled);
  result.pooled.assign(o.data(), o.data() + o.size());
  const Mat& a = tape.value(weights);
  result.weights.assign(a.data(), a.data() + a.size());
  return result;
}

VarId attention_pool_node(Tape& tape, VarId hidden, VarId w, VarId bias, VarId u,
                          VarId* weights_out) {
  const VarId scores =
      tape.matmul(tape.tanh(tape.add_rowvec(tape.matmul(hidden, w), bias)), u);
  const VarId weights = tape.softmax_col(scores);
  if (weights_out != nullptr) *weights_out = weights;
  return tape.matmul(tape.transpose(weights), hidden);
}

VarId gru_direction_node(Tape& tape, VarId input, VarId w, VarId u, VarId b,
                         bool reversed) {
  const int n = tape.value(input).rows();
  const int h3 = tape.value(w).cols();
  const int hidden = h3 / 3;
  const VarId x = reversed ? tape.reverse_rows(input) : input;
  VarId h = tape.constant(Mat(1, hidden));
  std::vector<VarId> steps;
  steps.reserve(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) {
    const VarId xt = tape.row(x, t);
    const VarId gx = tape.add_rowvec(tape.matmul(xt, w), b);  // 1 x 3H
    const VarId gh = tape.matmul(h, u);                       // 1 x 3H
    const VarId r = tape.sigmoid(
        tape.add(tape.slice_cols(gx, 0, hidden), tape.slice_cols(gh, 0, hidden)));
    const VarId z = tape.sigmoid(tape.add(tape.slice_cols(gx, hidden, 2 * hidden),
                                          tape.slice_cols(gh, hidden, 2 * hidden)));
    const VarId cand = tape.tanh(
        tape.add(tape.slice_cols(gx, 2 * hidden, 3 * hidden),
                 tape.mul(r, tape.slice_cols(gh, 2 * hidden, 3 * hidden))));
    // h_t = (1 - z) * cand + z * h_{t-1}
    h = tape.add(tape.mul(tape.affine(z, -1.0, 1.0), cand), tape.mul(z, h));
    steps.push_back(h);
  }
  const VarId stacked = tape.concat_rows(steps);
  return reversed ? tape.reverse_rows(stacked) : stacked;
}

VarId gru_bidir_node(Tape& tape, VarId input, VarId w_f, VarId u_f, VarId b_f,
                     VarId w_b, VarId u_b, VarId b_b) {
  const VarId fwd = gru_direction_node(tape, input, w_f, u_f, b_f, false);
  const VarId bwd = gru_direction_node(tape, input, w_b, u_b, b_b, true);
  return tape.concat_cols(fwd, bwd);
}

VarId recurrent_stack_node(Tape& tape, VarId input, const BoundParams& bound,
                           const std::string& prefix) {
  const int width = tape.value(input).cols();
  if (width % 2 != 0) raise(ErrorCode::OddWidth, "recurrent width must be even");
  const VarId l1 = gru_bidir_node(
      tape, input, bound.id(prefix + "1.fwd.w"), bound.id(prefix + "1.fwd.u"),
      bound.id(prefix + "1.fwd.b"), bound.id(prefix + "1.bwd.w"),
      bound.id(prefix + "1.bwd.u"), bound.id(prefix + "1.bwd.b"));
  const VarId l2 = gru_bidir_node(
      tape, l1, bound.id(prefix + "2.fwd.w"), bound.id(prefix + "2.fwd.u"),
      bound.id(prefix + "2.fwd.b"), bound.id(prefix + "2.bwd.w"),
      bound.id(prefix + "2.bwd.u"), bound.id(prefix + "2.bwd.b"));
  return tape.add(l2, input);  // skip connection over both layers
}

Mat recurrent_layer(const Mat& hidden, const RecurrentParams& params) {
  if (hidden.rows() < 1) raise(ErrorCode::EmptySequence, "recurrent_layer of empty sequence");
  if (hidden.cols() % 2 != 0) raise(ErrorCode::OddWidth, "recurrent width must be even");
  Tape tape;
  ParamStore store;
  store.add("rec1.fwd.w", params.layer1_fwd.w);
  store.add("rec1.fwd.u", params.layer1_fwd.u);
  store.add("rec1.fwd.b", params.layer1_fwd.b);
  store.add("rec1.bwd.w", params.layer1_bwd.w);
  store.add("rec1.bwd.u", params.layer1_bwd.u);
  store.add("rec1.bwd.b", params.layer1_bwd.b);
  store.add("rec2.fwd.w", params.layer2_fwd.w);
  store.add("rec2.fwd.u", params.layer2_fwd.u);
  store.add("rec2.fwd.b", params.layer2_fwd.b);
  store.add("rec2.bwd.w", params.layer2_bwd.w);
  store.add("rec2.bwd.u", params.layer2_bwd.u);
  store.add("rec2.bwd.b", params.layer2_bwd.b);
  const BoundParams bound = bind_params(tape, store);
  const VarId out = recurrent_stack_node(tape, tape.constant(hidden), bound, "rec");
  return tape.value(out);
}

double finite_difference_check(
    const std::function<double(std::span<const double>)>& loss_fn,
    std::span<const double> point, std::span<const double> analytic_grad,
    double eps) {
  if (point.size() != analytic_grad.size()) {
    raise(ErrorCode::ShapeMismatch, "gradient length mismatch");
  }
  if (!(eps > 0.0 && eps <= 1e-3)) raise(ErrorCode::OutOfRange, "eps out of range");
  std::vector<double> p(point.begin(), point.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double keep = p[i];
    p[i] = keep + eps;
    const double up = loss_fn(p);
    p[i] = keep - eps;
    const double down = loss_fn(p);
    p[i] = keep;
    if (!std::isfinite(up) || !std::isfinite(down)) {
      raise(ErrorCode::NonFiniteLoss, "loss is not finite near the test point");
    }
    const double numeric = (up - down) / (2.0 * eps);
    const double analytic = analytic_grad[i];
    const double rel = std::abs(analytic - numeric) /
                       std::max({1.0, std::abs(analytic), std::abs(numeric)});
    worst = std::max(worst, rel);
  }
  return worst;
}

void glorot_init(Mat& m, int fan_in, int fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / (fan_in + fan_out));
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-limit, limit);
}

}  // namespace antispoof::nn
