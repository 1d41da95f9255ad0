// tests/test_losses.cc
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "antispoof/losses.hpp"

#include <cmath>

#include "antispoof/backend.hpp"
#include "antispoof/selftest.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using antispoof::ErrorCode;
using antispoof::Mat;
using antispoof::Rng;
using namespace antispoof::loss;
namespace nn = antispoof::nn;
namespace th = test_helpers;

namespace {

Mat random_mat(int rows, int cols, Rng& rng) {
  Mat m(rows, cols);
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.gaussian();
  return m;
}

// Minimal cosine-head parameter set for head-level tape tests.
nn::ParamStore head_params(int emb_dim, int head_dim, Rng& rng) {
  nn::ParamStore store;
  store.add("head.proj.w", random_mat(emb_dim, head_dim, rng));
  store.add("head.proj.b", random_mat(1, head_dim, rng));
  store.add("head.class_w", random_mat(2, head_dim, rng));
  return store;
}

}  // namespace

TEST_CASE("margin softmax: zero margins give the uniform softmax") {
  LossConfig cfg;
  cfg.kind = LossKind::CeSoftmax;
  cfg.alpha = 1.0;
  cfg.m3 = {0.0, 0.0};
  const std::vector<double> equal = {0.4, 0.4};
  const auto probs = margin_softmax_probs(equal, 1, cfg);
  CHECK(probs[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(probs[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("margin softmax: additive-margin worked example") {
  const LossConfig cfg = LossConfig::preset("am");
  const std::vector<double> cosines = {0.8, 0.1};
  const auto probs = margin_softmax_probs(cosines, 1, cfg);
  const double expect = std::exp(-2.0) / (std::exp(-2.0) + std::exp(2.0));
  CHECK(std::abs(probs[0] - expect) < 1e-12);
  CHECK(std::abs(probs[0] - 0.01798620996209156) < 1e-12);
  CHECK(probs[0] + probs[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("margin softmax: raising the target margin lowers the target probability") {
  Rng rng(41);
  for (int rep = 0; rep < 50; ++rep) {
    LossConfig cfg = LossConfig::preset("am");
    const std::vector<double> cosines = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    const int y = 1 + static_cast<int>(rng.uniform_int(0, 1));
    cfg.m3 = {0.3, 0.3};
    const double before = margin_softmax_probs(cosines, y, cfg)[static_cast<std::size_t>(y - 1)];
    cfg.m3 = {0.6, 0.6};
    const double after = margin_softmax_probs(cosines, y, cfg)[static_cast<std::size_t>(y - 1)];
    CHECK(after < before);
  }
}

TEST_CASE("angular margins warp the target cosine through arccos") {
  LossConfig cfg = LossConfig::preset("am");
  cfg.m1 = 2.0;
  cfg.m2 = 0.1;
  cfg.m3 = {0.0, 0.0};
  cfg.alpha = 3.0;
  const std::vector<double> cosines = {0.6, -0.3};
  const auto probs = margin_softmax_probs(cosines, 1, cfg);
  const double warped = std::cos(2.0 * std::acos(0.6) + 0.1);
  const double l0 = 3.0 * warped;
  const double l1 = 3.0 * -0.3;
  const double expect = std::exp(l0) / (std::exp(l0) + std::exp(l1));
  CHECK(probs[0] == doctest::Approx(expect).epsilon(1e-12));

  // the head-level tape path agrees
  Rng rng(47);
  const auto params = head_params(5, 4, rng);
  const Mat emb = random_mat(1, 5, rng);
  nn::Tape tape;
  const auto bound = nn::bind_params(tape, params);
  const auto head = attach_head(tape, tape.constant(emb), 1, cfg, bound);
  const Mat& cos_row = tape.value(head.cosines);
  const double numeric = cross_entropy(
      margin_softmax_probs(std::vector<double>{cos_row(0, 0), cos_row(0, 1)}, 1, cfg), 1);
  CHECK(tape.value(head.loss)(0, 0) == doctest::Approx(numeric).epsilon(1e-12));
}

TEST_CASE("margin softmax rejects invalid cosines") {
  const LossConfig cfg = LossConfig::preset("am");
  CHECK(th::caught_code([&] {
          margin_softmax_probs(std::vector<double>{1.5, 0.0}, 1, cfg);
        }) == ErrorCode::InvalidCosine);
}

TEST_CASE("margin softmax reduces to plain scaled softmax at (1, 0, 0)") {
  Rng rng(42);
  LossConfig cfg = LossConfig::preset("am");
  cfg.m3 = {0.0, 0.0};
  for (int rep = 0; rep < 1000; ++rep) {
    const std::vector<double> cosines = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    const int y = 1 + static_cast<int>(rng.uniform_int(0, 1));
    const auto probs = margin_softmax_probs(cosines, y, cfg);
    const double l0 = cfg.alpha * cosines[0];
    const double l1 = cfg.alpha * cosines[1];
    const double mx = std::max(l0, l1);
    const double z = std::exp(l0 - mx) + std::exp(l1 - mx);
    CHECK(std::abs(probs[0] - std::exp(l0 - mx) / z) < 1e-12);
    CHECK(std::abs(probs[1] - std::exp(l1 - mx) / z) < 1e-12);
  }
}

TEST_CASE("one-class margins: both orientations honor per-class m3") {
  const std::vector<double> cosines = {0.5, -0.2};
  LossConfig cfg = LossConfig::preset("oc");

  // AllClasses: every class's own logit loses its margin
  const auto pa = margin_softmax_probs(cosines, 1, cfg);
  const double la0 = 20.0 * (0.5 - 0.9);
  const double la1 = 20.0 * (-0.2 - 0.2);
  CHECK(pa[0] == doctest::Approx(std::exp(la0) / (std::exp(la0) + std::exp(la1))).epsilon(1e-12));

  // TargetOnly: only the target logit is shifted
  cfg.oc_variant = OcVariant::TargetOnly;
  const auto pt = margin_softmax_probs(cosines, 2, cfg);
  const double lt0 = 20.0 * 0.5;
  const double lt1 = 20.0 * (-0.2 - 0.2);
  CHECK(pt[1] == doctest::Approx(std::exp(lt1) / (std::exp(lt0) + std::exp(lt1))).epsilon(1e-12));
}

TEST_CASE("cross entropy values") {
  CHECK(cross_entropy(std::vector<double>{1.0, 0.0}, 1) == 0.0);
  CHECK(cross_entropy(std::vector<double>{0.5, 0.5}, 2) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  // floored probability stays finite
  CHECK(std::isfinite(cross_entropy(std::vector<double>{0.0, 1.0}, 1)));
}

TEST_CASE("sigmoid binary loss: worked values and stability") {
  CHECK(sigmoid_binary_loss(0.0, 1) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(sigmoid_binary_loss(2.0, 1) == doctest::Approx(0.1269280110429725).epsilon(1e-12));
  CHECK(sigmoid_binary_loss(1000.0, 1) == doctest::Approx(0.0));
  CHECK(sigmoid_binary_loss(1000.0, 2) == doctest::Approx(1000.0));
  CHECK(std::isfinite(sigmoid_binary_loss(-1000.0, 2)));
}

TEST_CASE("p2sgrad mse values and bounds") {
  CHECK(p2sgrad_mse(std::vector<double>{1.0, 0.0}, 1) == 0.0);
  CHECK(p2sgrad_mse(std::vector<double>{0.0, 0.0}, 1) == 1.0);
  Rng rng(43);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> cosines = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    const double loss = p2sgrad_mse(cosines, 1 + static_cast<int>(rng.uniform_int(0, 1)));
    CHECK(loss >= 0.0);
    CHECK(loss <= 4.0 * 2);  // each term at most (1 + 1)^2
  }
}

TEST_CASE("p2sgrad analytic gradient equals the similarity-weighted form") {
  Rng rng(44);
  for (int rep = 0; rep < 100; ++rep) {
    const int dim = 6;
    const Mat o = random_mat(1, dim, rng);
    const Mat w = random_mat(2, dim, rng);
    const int y = 1 + static_cast<int>(rng.uniform_int(0, 1));

    nn::Tape tape;
    const nn::VarId ov = tape.input(o);
    const nn::VarId cos_v = tape.matmul(
        tape.normalize_rows(ov), tape.transpose(tape.normalize_rows(tape.constant(w))));
    Mat onehot(1, 2);
    onehot(0, y - 1) = 1.0;
    const nn::VarId loss_v =
        tape.sum(tape.square(tape.sub(cos_v, tape.constant(onehot))));
    tape.backward(loss_v);
    const Mat g = tape.grad_of(ov);

    // closed form: sum_k 2 (cos_k - target_k) (c_k_hat - cos_k o_hat) / |o|
    double norm_o = 0.0;
    for (int c = 0; c < dim; ++c) norm_o += o(0, c) * o(0, c);
    norm_o = std::sqrt(norm_o);
    std::vector<double> expect(static_cast<std::size_t>(dim), 0.0);
    for (int k = 0; k < 2; ++k) {
      double norm_c = 0.0, dot = 0.0;
      for (int c = 0; c < dim; ++c) norm_c += w(k, c) * w(k, c);
      norm_c = std::sqrt(norm_c);
      for (int c = 0; c < dim; ++c) dot += (w(k, c) / norm_c) * (o(0, c) / norm_o);
      const double coeff = 2.0 * (dot - (k == y - 1 ? 1.0 : 0.0));
      for (int c = 0; c < dim; ++c) {
        expect[static_cast<std::size_t>(c)] +=
            coeff * (w(k, c) / norm_c - dot * o(0, c) / norm_o) / norm_o;
      }
    }
    for (int c = 0; c < dim; ++c) {
      CHECK(g(0, c) == doctest::Approx(expect[static_cast<std::size_t>(c)]).epsilon(1e-10));
    }
  }
}

TEST_CASE("head-level losses agree with the numeric formulas") {
  Rng rng(45);
  for (const char* preset : {"ce", "am", "oc", "p2sgrad"}) {
    const LossConfig cfg = LossConfig::preset(preset);
    const auto params = head_params(5, 4, rng);
    const Mat emb = random_mat(1, 5, rng);
    const int y = 1 + static_cast<int>(rng.uniform_int(0, 1));

    nn::Tape tape;
    const auto bound = nn::bind_params(tape, params);
    const auto head = attach_head(tape, tape.constant(emb), y, cfg, bound);
    const Mat& cos_row = tape.value(head.cosines);
    const std::vector<double> cosines = {cos_row(0, 0), cos_row(0, 1)};

    double expect;
    if (cfg.kind == LossKind::P2SGrad) {
      expect = p2sgrad_mse(cosines, y);
    } else {
      expect = cross_entropy(margin_softmax_probs(cosines, y, cfg), y);
    }
    CHECK(tape.value(head.loss)(0, 0) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("inference scores") {
  Rng rng(46);
  // embedding parallel to class-1 weights scores exactly 1 through an
  // identity projection
  nn::ParamStore params;
  Mat proj(3, 3);
  for (int i = 0; i < 3; ++i) proj(i, i) = 1.0;
  params.add("head.proj.w", proj);
  params.add("head.proj.b", Mat(1, 3));
  Mat cw(2, 3);
  cw(0, 0) = 2.0;   // class 1 along e0
  cw(1, 1) = -3.0;  // class 2 along e1
  params.add("head.class_w", cw);

  Mat emb(1, 3);
  emb(0, 0) = 0.7;
  nn::Tape tape;
  const auto bound = nn::bind_params(tape, params);
  const auto head = attach_head(tape, tape.constant(emb), 0, LossConfig::preset("p2sgrad"),
                                bound);
  CHECK(head.score == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(inference_score(head, tape, LossConfig::preset("p2sgrad")) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // sigmoid head at zero logit scores one half
  nn::ParamStore sig;
  sig.add("head.w", Mat(3, 1));
  sig.add("head.b", Mat(1, 1));
  nn::Tape tape2;
  const auto bound2 = nn::bind_params(tape2, sig);
  const auto head2 = attach_head(tape2, tape2.constant(random_mat(1, 3, rng)), 0,
                                 LossConfig::preset("sigmoid"), bound2);
  CHECK(head2.score == doctest::Approx(0.5).epsilon(1e-15));

  // cosine-path scores are invariant to positive rescaling of o when the
  // projection is linear (identity weights, zero bias)
  const auto cfg = LossConfig::preset("p2sgrad");
  nn::ParamStore pure;
  Mat eye(4, 4);
  for (int i = 0; i < 4; ++i) eye(i, i) = 1.0;
  pure.add("head.proj.w", eye);
  pure.add("head.proj.b", Mat(1, 4));
  pure.add("head.class_w", random_mat(2, 4, rng));
  auto pure_score = [&](const Mat& o) {
    nn::Tape t;
    const auto b = nn::bind_params(t, pure);
    return attach_head(t, t.constant(o), 0, cfg, b).score;
  };
  for (int rep = 0; rep < 20; ++rep) {
    const Mat o = random_mat(1, 4, rng);
    Mat scaled = o;
    const double lambda = rng.uniform(0.1, 9.0);
    for (std::size_t i = 0; i < scaled.size(); ++i) scaled.data()[i] *= lambda;
    CHECK(pure_score(o) == doctest::Approx(pure_score(scaled)).epsilon(1e-9));
  }
}

TEST_CASE("every loss decreases along its own negative gradient") {
  std::uint64_t seed = 900;
  for (const char* preset : {"ce", "am", "oc", "sigmoid", "p2sgrad"}) {
    const LossConfig cfg = LossConfig::preset(preset);
    Rng rng(seed++);

    nn::ParamStore params;
    if (cfg.uses_cosine_head()) {
      params = head_params(5, 4, rng);
    } else {
      params.add("head.w", random_mat(5, 1, rng));
      params.add("head.b", random_mat(1, 1, rng));
    }
    const Mat emb = random_mat(1, 5, rng);
    const int y = 1 + static_cast<int>(rng.uniform_int(0, 1));

    auto eval = [&](double step, const std::vector<Mat>* grads) {
      nn::ParamStore moved;
      for (std::size_t i = 0; i < params.items().size(); ++i) {
        Mat m = params.items()[i].value;
        if (grads != nullptr) {
          for (std::size_t j = 0; j < m.size(); ++j) {
            m.data()[j] -= step * (*grads)[i].data()[j];
          }
        }
        moved.add(params.items()[i].name, std::move(m));
      }
      nn::Tape tape;
      const auto bound = nn::bind_params(tape, moved);
      const auto head = attach_head(tape, tape.constant(emb), y, cfg, bound);
      return tape.value(head.loss)(0, 0);
    };

    // gradient at the base point
    nn::Tape tape;
    const auto bound = nn::bind_params(tape, params);
    const auto head = attach_head(tape, tape.constant(emb), y, cfg, bound);
    const double base = tape.value(head.loss)(0, 0);
    tape.backward(head.loss);
    std::vector<Mat> grads;
    double grad_norm = 0.0;
    for (const auto id : bound.ids) {
      grads.push_back(tape.grad_of(id));
      for (std::size_t j = 0; j < grads.back().size(); ++j) {
        grad_norm += grads.back().data()[j] * grads.back().data()[j];
      }
    }
    REQUIRE(grad_norm > 0.0);

    bool decreased = false;
    for (double step = 1e-2; step >= 1e-10; step *= 0.5) {
      if (eval(step, &grads) < base) {
        decreased = true;
        break;
      }
    }
    CHECK_MESSAGE(decreased, "no descent for preset ", preset);
  }
}

TEST_CASE("p2sgrad direction property on random instances") {
  CHECK(antispoof::verify::p2sgrad_direction_violations(300, 64, 123) == 0);
}
