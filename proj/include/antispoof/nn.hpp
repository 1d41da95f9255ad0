// include/antispoof/nn.hpp
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef ANTISPOOF_NN_HPP_
#define ANTISPOOF_NN_HPP_

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "antispoof/tape.hpp"

namespace antispoof::nn {

struct NamedMat {
  std::string name;
  Mat value;
};

// Ordered collection of named parameter matrices. Insertion order is the
// canonical order for initialization, gradient accumulation and the Adam
// state, so runs are reproducible.
class ParamStore {
 public:
  Mat& add(const std::string& name, Mat value);
  Mat& get(const std::string& name);
  const Mat& get(const std::string& name) const;
  bool has(const std::string& name) const;
  int index_of(const std::string& name) const;  // -1 if absent

  std::vector<NamedMat>& items() { return items_; }
  const std::vector<NamedMat>& items() const { return items_; }
  std::size_t total_size() const;

  // params file: concatenated feature-cache blocks; manifest: JSON list
  // of {name, rows, cols, offset}.
  void save(const std::filesystem::path& bin_path,
            const std::filesystem::path& manifest_path) const;
  static ParamStore load(const std::filesystem::path& bin_path,
                         const std::filesystem::path& manifest_path);

 private:
  std::vector<NamedMat> items_;
};

// Gradient buffers aligned with a ParamStore's item order.
struct GradBuffer {
  explicit GradBuffer(const ParamStore& store);
  void accumulate(const GradBuffer& other);  // elementwise add
  void scale(double s);
  std::vector<Mat> grads;
};

// All parameters of a store registered on one tape, in store order.
struct BoundParams {
  std::vector<VarId> ids;  // aligned with store items
  const ParamStore* store = nullptr;
  VarId id(const std::string& name) const;
};
BoundParams bind_params(Tape& tape, const ParamStore& store);
// Adds every bound parameter's tape gradient into the buffer.
void collect_grads(const Tape& tape, const BoundParams& bound, GradBuffer& out);

// ---- spec-level operations (vectors are 1 x D rows) ----

std::vector<double> length_normalize(std::span<const double> v);
// entry k = normalized row k of weights dotted with normalized o.
std::vector<double> cosine_scores(std::span<const double> o, const Mat& class_weights);
std::vector<double> mean_pool(const Mat& hidden);

struct AttentionParams {
  Mat w;     // D_h x D_a
  Mat bias;  // 1 x D_a
  Mat u;     // D_a x 1
};
struct AttentionResult {
  std::vector<double> pooled;
  std::vector<double> weights;
};
AttentionResult attention_pool(const Mat& hidden, const AttentionParams& params);

struct GruParams {
  Mat w;  // In x 3H, gate order reset | update | candidate
  Mat u;  // H x 3H
  Mat b;  // 1 x 3H
};
struct RecurrentParams {
  // Two stacked bidirectional layers; one skip connection spans both.
  GruParams layer1_fwd, layer1_bwd, layer2_fwd, layer2_bwd;
};
Mat recurrent_layer(const Mat& hidden, const RecurrentParams& params);

// ---- tape builders used by the back ends ----

VarId attention_pool_node(Tape& tape, VarId hidden, VarId w, VarId bias, VarId u,
                          VarId* weights_out = nullptr);
VarId gru_direction_node(Tape& tape, VarId input, VarId w, VarId u, VarId b,
                         bool reversed);
VarId gru_bidir_node(Tape& tape, VarId input, VarId w_f, VarId u_f, VarId b_f,
                     VarId w_b, VarId u_b, VarId b_b);
// out = layer2(layer1(x)) + x
VarId recurrent_stack_node(Tape& tape, VarId input, const BoundParams& bound,
                           const std::string& prefix);

// ---- verification harness ----

// Central differences against the analytic gradient. Returns
// max_i |a_i - n_i| / max(1, |a_i|, |n_i|).
double finite_difference_check(
    const std::function<double(std::span<const double>)>& loss_fn,
    std::span<const double> point, std::span<const double> analytic_grad,
    double eps);

// Uniform in +-sqrt(6/(fan_in+fan_out)).
void glorot_init(Mat& m, int fan_in, int fan_out, Rng& rng);

}  // namespace antispoof::nn

#endif  // ANTISPOOF_NN_HPP_
