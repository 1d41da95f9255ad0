// src/selftest.cc
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "antispoof/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "antispoof/frontend.hpp"
#include "antispoof/stats.hpp"

namespace antispoof::verify {

std::vector<std::complex<double>> naive_dft(std::span<const double> x, int nfft) {
  std::vector<std::complex<double>> out(static_cast<std::size_t>(nfft));
  for (int k = 0; k < nfft; ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) {
      const double ang = -2.0 * M_PI * k * static_cast<double>(t) / nfft;
      re += x[t] * std::cos(ang);
      im += x[t] * std::sin(ang);
    }
    out[static_cast<std::size_t>(k)] = {re, im};
  }
  return out;
}

std::vector<double> naive_dct_ii(std::span<const double> v, int n_out) {
  const int m = static_cast<int>(v.size());
  std::vector<double> out(static_cast<std::size_t>(n_out), 0.0);
  for (int k = 0; k < n_out; ++k) {
    double acc = 0.0;
    for (int t = 0; t < m; ++t) {
      acc += v[static_cast<std::size_t>(t)] * std::cos(M_PI * (t + 0.5) * k / m);
    }
    out[static_cast<std::size_t>(k)] = acc * (k == 0 ? std::sqrt(1.0 / m) : std::sqrt(2.0 / m));
  }
  return out;
}

namespace {

struct RefPoint {
  double threshold;
  double frr;
  double far;
};

// Accept iff score >= t, recounted from scratch at each candidate.
RefPoint ref_point(const metrics::ScoreSet& scores, double t) {
  double nb = 0, ns = 0, rejected_bona = 0, accepted_spoof = 0;
  for (const auto& r : scores) {
    if (r.bonafide) {
      nb += 1;
      if (r.score < t) rejected_bona += 1;
    } else {
      ns += 1;
      if (r.score >= t) accepted_spoof += 1;
    }
  }
  return {t, rejected_bona / nb, accepted_spoof / ns};
}

}  // namespace

metrics::EerResult brute_force_eer(const metrics::ScoreSet& scores) {
  std::vector<double> distinct;
  bool has_bona = false, has_spoof = false;
  for (const auto& r : scores) {
    distinct.push_back(r.score);
    (r.bonafide ? has_bona : has_spoof) = true;
  }
  if (!has_bona || !has_spoof) raise(ErrorCode::SingleClass, "need both classes");
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  std::vector<RefPoint> points;
  for (double s : distinct) points.push_back(ref_point(scores, s));
  points.push_back(ref_point(
      scores, std::nextafter(distinct.back(), std::numeric_limits<double>::infinity())));

  for (std::size_t i = 0; i < points.size(); ++i) {
    const double diff = points[i].frr - points[i].far;
    if (diff == 0.0) {
      return {0.5 * (points[i].frr + points[i].far), points[i].threshold};
    }
    if (diff > 0.0) {
      const auto& lo = points[i - 1];
      const auto& hi = points[i];
      return {0.5 * (0.5 * (lo.frr + lo.far) + 0.5 * (hi.frr + hi.far)),
              0.5 * (lo.threshold + hi.threshold)};
    }
  }
  raise(ErrorCode::SingleClass, "no crossing found");
}

double reference_min_tdcf(const metrics::ScoreSet& scores,
                          const metrics::TdcfCostModel& cost) {
  const double c1 = cost.p_tar * (cost.c_miss_cm - cost.c_miss_asv * cost.p_miss_asv) -
                    cost.p_non * cost.c_fa_asv * cost.p_fa_asv;
  const double c2 = cost.c_fa_cm * cost.p_spoof * (1.0 - cost.p_miss_spoof_asv);
  if (c1 <= 0.0 || c2 <= 0.0) raise(ErrorCode::DegenerateCost, "nonpositive coefficient");

  // Per-trial sweep: sort all scores ascending (stable), walk the
  // cumulative counts, prepend the accept-all point.
  std::vector<std::pair<double, int>> tagged;  // (score, 1 = bonafide)
  double nb = 0, ns = 0;
  for (const auto& r : scores) {
    tagged.emplace_back(r.score, r.bonafide ? 1 : 0);
    (r.bonafide ? nb : ns) += 1;
  }
  if (nb == 0 || ns == 0) raise(ErrorCode::SingleClass, "need both classes");
  std::stable_sort(tagged.begin(), tagged.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  double best = std::numeric_limits<double>::infinity();
  double miss = 0.0;  // accept-all point
  double fa = ns;
  best = std::min(best, (c1 * (miss / nb) + c2 * (fa / ns)) / std::min(c1, c2));
  for (const auto& [score, is_bona] : tagged) {
    (void)score;
    if (is_bona == 1) {
      miss += 1;
    } else {
      fa -= 1;
    }
    best = std::min(best, (c1 * (miss / nb) + c2 * (fa / ns)) / std::min(c1, c2));
  }
  return best;
}

double series_normal_cdf(double z) {
  const long double x = static_cast<long double>(z) / std::sqrt(2.0L);
  const long double ax = std::abs(x);
  const long double sqrt_pi = std::sqrt(static_cast<long double>(M_PI));
  long double erf_ax;
  if (ax <= 2.0L) {
    // erf(x) = 2/sqrt(pi) * sum_{n>=0} (-1)^n x^(2n+1) / (n! (2n+1));
    // cancellation stays below e^(x^2) * eps, fine for |x| <= 2
    long double term = ax;
    long double sum = ax;
    for (int n = 1; n < 200; ++n) {
      term *= -ax * ax / n;
      sum += term / (2 * n + 1);
      if (std::abs(term) < 1e-25L) break;
    }
    erf_ax = 2.0L / sqrt_pi * sum;
  } else {
    // Lentz evaluation of the classical continued fraction
    //   sqrt(pi) e^(x^2) erfc(x) = 1/(x + (1/2)/(x + (2/2)/(x + ...)))
    const long double tiny = 1e-40L;
    long double f = ax, c = ax, d = 0.0L;
    for (int n = 1; n < 400; ++n) {
      const long double a = n / 2.0L;
      d = ax + a * d;
      if (d == 0.0L) d = tiny;
      d = 1.0L / d;
      c = ax + a / c;
      if (c == 0.0L) c = tiny;
      const long double delta = c * d;
      f *= delta;
      if (std::abs(delta - 1.0L) < 1e-21L) break;
    }
    const long double erfc_ax = std::exp(-ax * ax) / (sqrt_pi * f);
    erf_ax = 1.0L - erfc_ax;
  }
  const long double erf_x = x < 0 ? -erf_ax : erf_ax;
  return static_cast<double>(0.5L * (1.0L + erf_x));
}

std::vector<bool> reference_holm(std::span<const double> p_values, double alpha_level) {
  const std::size_t m = p_values.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });
  std::vector<bool> reject(m, false);
  for (std::size_t rank = 1; rank <= m; ++rank) {
    const std::size_t idx = order[rank - 1];
    if (p_values[idx] <= alpha_level / static_cast<double>(m - rank + 1)) {
      reject[idx] = true;
    } else {
      return reject;
    }
  }
  return reject;
}

GradCheckResult gradient_check_instance(loss::LossKind kind, model::Strategy strategy,
                                        bool use_recurrent, std::uint64_t seed) {
  Rng rng(seed);
  model::BackendConfig cfg;
  cfg.strategy = strategy;
  cfg.input_dim = 8;
  cfg.conv_channels = 6;
  cfg.hidden_dim = 6;
  cfg.attention_dim = 3;
  cfg.head_dim = 5;
  cfg.trim_frames = 8;
  cfg.chunk_frames = 6;
  cfg.use_recurrent = use_recurrent;

  loss::LossConfig loss_cfg;
  switch (kind) {
    case loss::LossKind::CeSoftmax: loss_cfg = loss::LossConfig::preset("ce"); break;
    case loss::LossKind::AmSoftmax: loss_cfg = loss::LossConfig::preset("am"); break;
    case loss::LossKind::OcSoftmax: loss_cfg = loss::LossConfig::preset("oc"); break;
    case loss::LossKind::CeSigmoid: loss_cfg = loss::LossConfig::preset("sigmoid"); break;
    case loss::LossKind::P2SGrad: loss_cfg = loss::LossConfig::preset("p2sgrad"); break;
  }
  const int n_frames = strategy == model::Strategy::TrimPad
                           ? cfg.trim_frames
                           : 5 + static_cast<int>(rng.uniform_int(0, 7));
  Mat input(n_frames, cfg.input_dim);
  for (std::size_t i = 0; i < input.size(); ++i) input.data()[i] = rng.gaussian();
  const int y = 1 + static_cast<int>(rng.uniform_int(0, 1));

  nn::ParamStore params = model::init_backend_params(cfg, loss_cfg, rng);

  std::vector<double> point;
  for (const auto& item : params.items()) {
    point.insert(point.end(), item.value.data(), item.value.data() + item.value.size());
  }
  point.insert(point.end(), input.data(), input.data() + input.size());

  auto build_loss = [&](std::span<const double> coords, std::vector<double>* grad_out) {
    nn::ParamStore local;
    std::size_t offset = 0;
    for (const auto& item : params.items()) {
      Mat m(item.value.rows(), item.value.cols());
      std::copy(coords.begin() + static_cast<std::ptrdiff_t>(offset),
                coords.begin() + static_cast<std::ptrdiff_t>(offset + m.size()), m.data());
      offset += m.size();
      local.add(item.name, std::move(m));
    }
    Mat x(input.rows(), input.cols());
    std::copy(coords.begin() + static_cast<std::ptrdiff_t>(offset), coords.end(), x.data());

    nn::Tape tape;
    const nn::VarId xv = tape.input(std::move(x));
    const nn::BoundParams bound = nn::bind_params(tape, local);
    const nn::VarId embedding = model::backend_forward(tape, xv, cfg, bound);
    const loss::HeadOutputs head = loss::attach_head(tape, embedding, y, loss_cfg, bound);
    const double value = tape.value(head.loss)(0, 0);
    if (grad_out != nullptr) {
      tape.backward(head.loss);
      grad_out->clear();
      for (const nn::VarId id : bound.ids) {
        const Mat g = tape.grad_of(id);
        grad_out->insert(grad_out->end(), g.data(), g.data() + g.size());
      }
      const Mat gx = tape.grad_of(xv);
      grad_out->insert(grad_out->end(), gx.data(), gx.data() + gx.size());
    }
    return value;
  };

  std::vector<double> analytic;
  build_loss(point, &analytic);
  const double err = nn::finite_difference_check(
      [&](std::span<const double> p) { return build_loss(p, nullptr); }, point, analytic,
      1e-5);
  return {err, static_cast<int>(point.size())};
}

int p2sgrad_direction_violations(int n_instances, int dim, std::uint64_t seed) {
  Rng rng(seed);
  int violations = 0;
  for (int i = 0; i < n_instances; ++i) {
    Mat o(1, dim);
    Mat weights(2, dim);
    for (std::size_t j = 0; j < o.size(); ++j) o.data()[j] = rng.gaussian();
    for (std::size_t j = 0; j < weights.size(); ++j) weights.data()[j] = rng.gaussian();
    const int y = 1 + static_cast<int>(rng.uniform_int(0, 1));

    // gradient of the MSE loss wrt o, through the implementation
    nn::Tape loss_tape;
    const nn::VarId ov = loss_tape.input(o);
    const nn::VarId cos_v = loss_tape.matmul(
        loss_tape.normalize_rows(ov),
        loss_tape.transpose(loss_tape.normalize_rows(loss_tape.constant(weights))));
    if (loss_tape.value(cos_v)(0, y - 1) >= 1.0) continue;
    Mat onehot(1, 2);
    onehot(0, y - 1) = 1.0;
    const nn::VarId loss_v =
        loss_tape.sum(loss_tape.square(loss_tape.sub(cos_v, loss_tape.constant(onehot))));
    loss_tape.backward(loss_v);
    const Mat g = loss_tape.grad_of(ov);

    // direction that increases the target cosine
    nn::Tape cos_tape;
    const nn::VarId ov2 = cos_tape.input(o);
    const nn::VarId cos2 = cos_tape.matmul(
        cos_tape.normalize_rows(ov2),
        cos_tape.transpose(cos_tape.normalize_rows(cos_tape.constant(weights))));
    cos_tape.backward(cos_tape.pick(cos2, 0, y - 1));
    const Mat d = cos_tape.grad_of(ov2);

    double dot = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) dot += -g.data()[j] * d.data()[j];
    if (!(dot > 0.0)) ++violations;
  }
  return violations;
}

namespace {

struct Check {
  const char* name;
  bool (*fn)();
};

bool check_fft_against_dft() {
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const int nfft = 64;
    const int len = 1 + static_cast<int>(rng.uniform_int(0, 63));
    std::vector<double> frame(static_cast<std::size_t>(len));
    for (double& v : frame) v = rng.uniform(-1.0, 1.0);
    const auto mine = frontend::power_spectrum(frame, nfft);
    const auto ref = naive_dft(frame, nfft);
    for (int k = 0; k <= nfft / 2; ++k) {
      if (std::abs(mine[static_cast<std::size_t>(k)] -
                   std::norm(ref[static_cast<std::size_t>(k)])) > 1e-9) {
        return false;
      }
    }
    double ref_total = 0.0, time_total = 0.0;
    for (const auto& c : ref) ref_total += std::norm(c);
    for (double v : frame) time_total += v * v;
    if (std::abs(ref_total - nfft * time_total) > 1e-9 * std::max(1.0, ref_total)) {
      return false;
    }
  }
  return true;
}

bool check_dct_against_naive() {
  Rng rng(12);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> v(8);
    for (double& x : v) x = rng.uniform(-2.0, 2.0);
    const auto mine = frontend::dct_ii(v, 8);
    const auto ref = naive_dct_ii(v, 8);
    for (std::size_t k = 0; k < mine.size(); ++k) {
      if (std::abs(mine[k] - ref[k]) > 1e-10) return false;
    }
  }
  return true;
}

metrics::ScoreSet random_score_set(Rng& rng, int max_each) {
  metrics::ScoreSet set;
  const int nb = 1 + static_cast<int>(rng.uniform_int(0, max_each - 1));
  const int ns = 1 + static_cast<int>(rng.uniform_int(0, max_each - 1));
  for (int i = 0; i < nb; ++i) {
    set.push_back({"b" + std::to_string(i), "-", true, rng.uniform(-1.0, 2.0)});
  }
  for (int i = 0; i < ns; ++i) {
    set.push_back({"s" + std::to_string(i), "A01", false, rng.uniform(-2.0, 1.0)});
  }
  return set;
}

bool check_eer_oracle() {
  Rng rng(13);
  for (int rep = 0; rep < 50; ++rep) {
    const auto set = random_score_set(rng, 40);
    const auto fast = metrics::compute_eer(set);
    const auto ref = brute_force_eer(set);
    if (std::abs(fast.eer - ref.eer) > 1e-9) return false;
  }
  return true;
}

bool check_tdcf_oracle() {
  Rng rng(14);
  const metrics::TdcfCostModel cost;
  for (int rep = 0; rep < 50; ++rep) {
    const auto set = random_score_set(rng, 40);
    if (std::abs(metrics::compute_min_tdcf(set, cost) - reference_min_tdcf(set, cost)) >
        1e-12) {
      return false;
    }
  }
  return true;
}

bool check_normal_quantile() {
  for (double p : {1e-6, 1e-3, 0.025, 0.2, 0.5, 0.8, 0.975, 1.0 - 1e-3, 1.0 - 1e-6}) {
    const double z = stats::normal_quantile(p);
    if (std::abs(stats::normal_cdf(z) - p) > 1e-10) return false;
    if (std::abs(stats::normal_cdf(z) - series_normal_cdf(z)) > 1e-13) return false;
  }
  return std::abs(stats::normal_quantile(0.975) - 1.959964) < 1e-5;
}

bool check_holm() {
  Rng rng(15);
  for (int rep = 0; rep < 100; ++rep) {
    const int m = 1 + static_cast<int>(rng.uniform_int(0, 19));
    std::vector<double> p(static_cast<std::size_t>(m));
    for (double& x : p) x = rng.uniform(0.0, 1.0);
    if (stats::holm_bonferroni(p, 0.05) != reference_holm(p, 0.05)) return false;
  }
  return true;
}

bool check_gradients() {
  const loss::LossKind kinds[] = {loss::LossKind::CeSoftmax, loss::LossKind::AmSoftmax,
                                  loss::LossKind::OcSoftmax, loss::LossKind::CeSigmoid,
                                  loss::LossKind::P2SGrad};
  const model::Strategy strategies[] = {model::Strategy::PoolMean,
                                        model::Strategy::PoolAttention,
                                        model::Strategy::TrimPad};
  std::uint64_t seed = 1000;
  for (const auto kind : kinds) {
    for (const auto strategy : strategies) {
      const auto result = gradient_check_instance(kind, strategy, false, seed++);
      if (result.max_rel_err >= 1e-5) return false;
    }
  }
  return gradient_check_instance(loss::LossKind::P2SGrad, model::Strategy::PoolMean, true,
                                 seed)
             .max_rel_err < 1e-5;
}

bool check_p2sgrad_direction() {
  return p2sgrad_direction_violations(200, 64, 77) == 0;
}

bool check_margin_reduction() {
  Rng rng(16);
  loss::LossConfig plain = loss::LossConfig::preset("am");
  plain.m3 = {0.0, 0.0};
  for (int rep = 0; rep < 100; ++rep) {
    const double cosines[2] = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    const int y = 1 + static_cast<int>(rng.uniform_int(0, 1));
    const auto probs = loss::margin_softmax_probs(cosines, y, plain);
    const double l0 = plain.alpha * cosines[0];
    const double l1 = plain.alpha * cosines[1];
    const double mx = std::max(l0, l1);
    const double z = std::exp(l0 - mx) + std::exp(l1 - mx);
    if (std::abs(probs[0] - std::exp(l0 - mx) / z) > 1e-12) return false;
  }
  return true;
}

const Check kChecks[] = {
    {"fft vs naive dft + parseval", check_fft_against_dft},
    {"dct vs naive dct", check_dct_against_naive},
    {"eer vs brute-force sweep", check_eer_oracle},
    {"min t-dcf vs reference sweep", check_tdcf_oracle},
    {"normal quantile round trip", check_normal_quantile},
    {"holm step-down vs reference", check_holm},
    {"margin softmax reduces to scaled softmax", check_margin_reduction},
    {"full-model gradient checks", check_gradients},
    {"mse-to-cosine gradient direction", check_p2sgrad_direction},
};

}  // namespace

bool run_selftests(bool verbose) {
  bool all_ok = true;
  for (const auto& check : kChecks) {
    bool ok = false;
    std::string note;
    try {
      ok = check.fn();
    } catch (const std::exception& e) {
      ok = false;
      note = e.what();
    }
    all_ok = all_ok && ok;
    if (verbose || !ok) {
      std::printf("[%s] %s%s%s\n", ok ? "PASS" : "FAIL", check.name,
                  note.empty() ? "" : ": ", note.c_str());
    }
  }
  return all_ok;
}

}  // namespace antispoof::verify
