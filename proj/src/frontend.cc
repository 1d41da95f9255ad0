// src/frontend.cc
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "antispoof/frontend.hpp"

#include <cmath>
#include <complex>
#include <numeric>

namespace antispoof::frontend {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 Cooley-Tukey, in place. Deterministic for a fixed
// libm; the O(n^2) DFT oracle in the test suite cross-checks it.
void fft_radix2(std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * M_PI / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = x[i + k];
        const std::complex<double> v = x[i + k + len / 2] * w;
        x[i + k] = u + v;
        x[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

}  // namespace

int FrontendConfig::frame_len_samples() const {
  return static_cast<int>(std::llround(sample_rate * frame_len_ms / 1000.0));
}

int FrontendConfig::frame_shift_samples() const {
  return static_cast<int>(std::llround(sample_rate * frame_shift_ms / 1000.0));
}

int FrontendConfig::feature_dim() const {
  switch (kind) {
    case FrontendKind::Spec: return nfft / 2 + 1;
    case FrontendKind::Lfb: return lfb_channels;
    case FrontendKind::Lfcc: return 3 * lfcc_ceps;
  }
  return 0;
}

void FrontendConfig::validate() const {
  if (sample_rate <= 0) raise(ErrorCode::ConfigError, "sample_rate must be positive");
  if (!is_pow2(nfft)) raise(ErrorCode::ConfigError, "nfft must be a power of two");
  if (frame_len_samples() <= 0 || frame_shift_samples() <= 0) {
    raise(ErrorCode::ConfigError, "frame length/shift must be positive");
  }
  if (frame_len_samples() > nfft) {
    raise(ErrorCode::ConfigError, "frame length exceeds nfft");
  }
  if (lfcc_ceps > lfcc_channels) {
    raise(ErrorCode::ConfigError, "lfcc_ceps must not exceed lfcc_channels");
  }
  if (lfb_channels < 1 || lfcc_channels < 1 || lfcc_ceps < 1) {
    raise(ErrorCode::ConfigError, "channel counts must be positive");
  }
  if (delta_window < 1) raise(ErrorCode::ConfigError, "delta_window must be >= 1");
  if (log_floor <= 0.0) raise(ErrorCode::ConfigError, "log_floor must be positive");
}

Mat frame_signal(const audio::SignalBuffer& signal, const FrontendConfig& cfg) {
  const std::size_t len = signal.samples.size();
  if (len == 0) raise(ErrorCode::EmptySignal, "cannot frame an empty signal");
  const int flen = cfg.frame_len_samples();
  const int shift = cfg.frame_shift_samples();
  const int n_frames =
      static_cast<int>((len + static_cast<std::size_t>(shift) - 1) / shift);
  Mat frames(n_frames, flen);
  for (int m = 0; m < n_frames; ++m) {
    const std::size_t start = static_cast<std::size_t>(m) * shift;
    for (int t = 0; t < flen; ++t) {
      const std::size_t idx = start + static_cast<std::size_t>(t);
      frames(m, t) = idx < len ? signal.samples[idx] : 0.0;
    }
  }
  return frames;
}

std::vector<double> hann_window(int n) {
  std::vector<double> w(static_cast<std::size_t>(n), 1.0);
  if (n > 1) {
    for (int i = 0; i < n; ++i) {
      w[static_cast<std::size_t>(i)] =
          0.5 - 0.5 * std::cos(2.0 * M_PI * i / (n - 1));
    }
  }
  return w;
}

std::vector<double> power_spectrum(std::span<const double> frame, int nfft,
                                   std::span<const double> window) {
  if (!is_pow2(nfft)) raise(ErrorCode::ConfigError, "nfft must be a power of two");
  if (static_cast<int>(frame.size()) > nfft) {
    raise(ErrorCode::FrameTooLong, "frame longer than nfft");
  }
  if (!window.empty() && window.size() != frame.size()) {
    raise(ErrorCode::ShapeMismatch, "window length must match frame length");
  }
  std::vector<std::complex<double>> buf(static_cast<std::size_t>(nfft));
  for (std::size_t t = 0; t < frame.size(); ++t) {
    const double w = window.empty() ? 1.0 : window[t];
    buf[t] = std::complex<double>(frame[t] * w, 0.0);
  }
  fft_radix2(buf);
  std::vector<double> power(static_cast<std::size_t>(nfft / 2 + 1));
  for (int k = 0; k <= nfft / 2; ++k) {
    power[static_cast<std::size_t>(k)] = std::norm(buf[static_cast<std::size_t>(k)]);
  }
  return power;
}

Mat build_linear_filterbank(int num_filters, int nfft, int sample_rate) {
  if (num_filters < 1) raise(ErrorCode::ConfigError, "need at least one filter");
  const int n_bins = nfft / 2 + 1;
  const double nyquist = sample_rate / 2.0;
  // num_filters + 2 boundary points, linearly spaced over [0, Nyquist],
  // snapped to the nearest FFT bin.
  std::vector<int> bins(static_cast<std::size_t>(num_filters) + 2);
  for (int i = 0; i < num_filters + 2; ++i) {
    const double freq = nyquist * i / (num_filters + 1);
    const int bin = static_cast<int>(std::floor(freq * nfft / sample_rate + 0.5));
    bins[static_cast<std::size_t>(i)] = std::min(bin, n_bins - 1);
  }
  for (int i = 0; i + 1 < num_filters + 2; ++i) {
    if (bins[static_cast<std::size_t>(i)] >= bins[static_cast<std::size_t>(i) + 1]) {
      raise(ErrorCode::TooManyFilters,
            "filter centers collide after bin rounding");
    }
  }
  Mat fb(num_filters, n_bins);
  for (int f = 0; f < num_filters; ++f) {
    const int lo = bins[static_cast<std::size_t>(f)];
    const int center = bins[static_cast<std::size_t>(f) + 1];
    const int hi = bins[static_cast<std::size_t>(f) + 2];
    for (int k = lo; k <= center; ++k) {
      fb(f, k) = static_cast<double>(k - lo) / (center - lo);
    }
    for (int k = center; k <= hi; ++k) {
      fb(f, k) = static_cast<double>(hi - k) / (hi - center);
    }
  }
  return fb;
}

Mat dct_ii_basis(int m, int n_out) {
  if (n_out > m) raise(ErrorCode::ShapeMismatch, "dct output longer than input");
  Mat basis(n_out, m);
  const double s0 = std::sqrt(1.0 / m);
  const double sk = std::sqrt(2.0 / m);
  for (int k = 0; k < n_out; ++k) {
    for (int t = 0; t < m; ++t) {
      basis(k, t) = (k == 0 ? s0 : sk) * std::cos(M_PI * (t + 0.5) * k / m);
    }
  }
  return basis;
}

std::vector<double> dct_ii(std::span<const double> v, int n_out) {
  const int m = static_cast<int>(v.size());
  const Mat basis = dct_ii_basis(m, n_out);
  std::vector<double> out(static_cast<std::size_t>(n_out), 0.0);
  for (int k = 0; k < n_out; ++k) {
    double acc = 0.0;
    for (int t = 0; t < m; ++t) acc += basis(k, t) * v[static_cast<std::size_t>(t)];
    out[static_cast<std::size_t>(k)] = acc;
  }
  return out;
}

Mat compute_deltas(const Mat& statics, int window) {
  const int n = statics.rows();
  const int d = statics.cols();
  double denom = 0.0;
  for (int w = 1; w <= window; ++w) denom += static_cast<double>(w) * w;
  denom *= 2.0;
  Mat deltas(n, d);
  auto at = [&](int r) { return std::min(std::max(r, 0), n - 1); };
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < d; ++c) {
      double acc = 0.0;
      for (int w = 1; w <= window; ++w) {
        acc += w * (statics(at(r + w), c) - statics(at(r - w), c));
      }
      deltas(r, c) = acc / denom;
    }
  }
  return deltas;
}

Mat extract_features(const audio::SignalBuffer& signal, const FrontendConfig& cfg) {
  cfg.validate();
  const Mat frames = frame_signal(signal, cfg);
  const int n = frames.rows();
  const int flen = frames.cols();
  const std::vector<double> window =
      cfg.window == WindowKind::Hann ? hann_window(flen) : std::vector<double>{};

  const int n_bins = cfg.nfft / 2 + 1;
  Mat power(n, n_bins);
  par::for_each_index(n, [&](int m) {
    const std::span<const double> frame(frames.data() + static_cast<std::size_t>(m) * flen,
                                        static_cast<std::size_t>(flen));
    const auto p = power_spectrum(frame, cfg.nfft, window);
    for (int k = 0; k < n_bins; ++k) power(m, k) = p[static_cast<std::size_t>(k)];
  });

  switch (cfg.kind) {
    case FrontendKind::Spec: {
      Mat out(n, n_bins);
      for (int m = 0; m < n; ++m) {
        for (int k = 0; k < n_bins; ++k) {
          out(m, k) = std::log(power(m, k) + cfg.log_floor);
        }
      }
      return out;
    }
    case FrontendKind::Lfb: {
      const Mat fb = build_linear_filterbank(cfg.lfb_channels, cfg.nfft, cfg.sample_rate);
      Mat energies = matmul(power, transpose(fb));
      for (int m = 0; m < n; ++m) {
        for (int k = 0; k < cfg.lfb_channels; ++k) {
          energies(m, k) = std::log(energies(m, k) + cfg.log_floor);
        }
      }
      return energies;
    }
    case FrontendKind::Lfcc: {
      const Mat fb =
          build_linear_filterbank(cfg.lfcc_channels, cfg.nfft, cfg.sample_rate);
      Mat energies = matmul(power, transpose(fb));
      for (int m = 0; m < n; ++m) {
        for (int k = 0; k < cfg.lfcc_channels; ++k) {
          energies(m, k) = std::log(energies(m, k) + cfg.log_floor);
        }
      }
      const Mat basis = dct_ii_basis(cfg.lfcc_channels, cfg.lfcc_ceps);
      Mat statics = matmul(energies, transpose(basis));
      // Cepstral coefficient 0 is replaced by the log spectral energy of
      // the frame (sum over all power bins).
      for (int m = 0; m < n; ++m) {
        double total = 0.0;
        for (int k = 0; k < n_bins; ++k) total += power(m, k);
        statics(m, 0) = std::log(total + cfg.log_floor);
      }
      const Mat delta = compute_deltas(statics, cfg.delta_window);
      const Mat delta2 = compute_deltas(delta, cfg.delta_window);
      Mat out(n, 3 * cfg.lfcc_ceps);
      for (int m = 0; m < n; ++m) {
        for (int k = 0; k < cfg.lfcc_ceps; ++k) {
          out(m, k) = statics(m, k);
          out(m, cfg.lfcc_ceps + k) = delta(m, k);
          out(m, 2 * cfg.lfcc_ceps + k) = delta2(m, k);
        }
      }
      return out;
    }
  }
  raise(ErrorCode::ConfigError, "unknown frontend kind");
}

}  // namespace antispoof::frontend
