// tests/test_audio_io.cc
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "antispoof/audio_io.hpp"

#include <cstring>
#include <filesystem>

#include "doctest.h"
#include "test_helpers.hpp"

using antispoof::ErrorCode;
using antispoof::Mat;
using namespace antispoof::audio;
namespace th = test_helpers;

TEST_CASE("read_wav round-trips a declared header") {
  const auto dir = th::scratch_dir("wav");
  std::vector<std::int16_t> samples(16000, 0);
  th::write_bytes(dir / "a.wav", th::wav_bytes(samples, 16000));
  const auto sig = read_wav(dir / "a.wav");
  CHECK(sig.sample_rate == 16000);
  CHECK(sig.samples.size() == 16000);
  for (double s : sig.samples) CHECK(s == 0.0);
}

TEST_CASE("read_wav quantization: divisor is 32768") {
  const auto dir = th::scratch_dir("wav");
  th::write_bytes(dir / "q.wav", th::wav_bytes({-32768, 16384, 0, 32767}, 8000));
  const auto sig = read_wav(dir / "q.wav");
  CHECK(sig.sample_rate == 8000);
  CHECK(sig.samples[0] == -1.0);
  CHECK(sig.samples[1] == 0.5);
  CHECK(sig.samples[2] == 0.0);
  CHECK(sig.samples[3] == 32767.0 / 32768.0);
  for (double s : sig.samples) CHECK(std::abs(s) < 1.0 + 0x1p-15);
}

TEST_CASE("read_wav is deterministic") {
  const auto dir = th::scratch_dir("wav");
  th::write_bytes(dir / "d.wav", th::wav_bytes({1, -2, 3, -4, 5}, 16000));
  const auto a = read_wav(dir / "d.wav");
  const auto b = read_wav(dir / "d.wav");
  CHECK(a.samples == b.samples);
  CHECK(a.sample_rate == b.sample_rate);
}

TEST_CASE("read_wav rejects bad inputs") {
  const auto dir = th::scratch_dir("wav");

  th::write_bytes(dir / "notwav.wav", {'J', 'U', 'N', 'K', 0, 0, 0, 0});
  CHECK(th::caught_code([&] { read_wav(dir / "notwav.wav"); }) == ErrorCode::NotWav);

  auto stereo = th::wav_bytes({0, 0}, 16000);
  stereo[22] = 2;  // channel count
  th::write_bytes(dir / "stereo.wav", stereo);
  CHECK(th::caught_code([&] { read_wav(dir / "stereo.wav"); }) ==
        ErrorCode::UnsupportedEncoding);

  auto eight_bit = th::wav_bytes({0, 0}, 16000);
  eight_bit[34] = 8;  // bits per sample
  th::write_bytes(dir / "8bit.wav", eight_bit);
  CHECK(th::caught_code([&] { read_wav(dir / "8bit.wav"); }) ==
        ErrorCode::UnsupportedEncoding);

  auto truncated = th::wav_bytes({1, 2, 3, 4}, 16000);
  truncated.resize(truncated.size() - 3);  // cut into the data chunk
  th::write_bytes(dir / "trunc.wav", truncated);
  CHECK(th::caught_code([&] { read_wav(dir / "trunc.wav"); }) == ErrorCode::TruncatedFile);

  CHECK(th::caught_code([&] { read_wav(dir / "missing.wav"); }) == ErrorCode::IoFailure);
}

TEST_CASE("feature cache: 1x1 zero matrix is header plus four bytes") {
  const auto dir = th::scratch_dir("cache");
  Mat m(1, 1);
  write_feature_cache(m, dir / "one.fmat");
  CHECK(std::filesystem::file_size(dir / "one.fmat") == 16);  // 4+4+4 header, 4 payload
  const Mat back = read_feature_cache(dir / "one.fmat");
  CHECK(back.rows() == 1);
  CHECK(back.cols() == 1);
  CHECK(back(0, 0) == 0.0);
}

TEST_CASE("feature cache round-trips random float32 matrices bit-exactly") {
  const auto dir = th::scratch_dir("cache");
  antispoof::Rng rng(99);
  for (int rep = 0; rep < 25; ++rep) {
    const int rows = 1 + static_cast<int>(rng.uniform_int(0, 7));
    const int cols = 1 + static_cast<int>(rng.uniform_int(0, 70));
    Mat m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i) {
      // values representable at binary32 round-trip exactly
      m.data()[i] = static_cast<double>(static_cast<float>(rng.uniform(-100.0, 100.0)));
    }
    write_feature_cache(m, dir / "rt.fmat");
    const Mat back = read_feature_cache(dir / "rt.fmat");
    REQUIRE(back.same_shape(m));
    CHECK(antispoof::bit_equal(back, m));
  }
}

TEST_CASE("feature cache error paths") {
  const auto dir = th::scratch_dir("cache");
  Mat m(3, 2);
  write_feature_cache(m, dir / "x.fmat");

  auto bytes = std::vector<unsigned char>{};
  {
    std::ifstream in(dir / "x.fmat", std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  bytes[0] = 'X';
  th::write_bytes(dir / "badmagic.fmat", bytes);
  CHECK(th::caught_code([&] { read_feature_cache(dir / "badmagic.fmat"); }) ==
        ErrorCode::BadMagic);

  bytes[0] = 'F';
  bytes.pop_back();
  th::write_bytes(dir / "short.fmat", bytes);
  CHECK(th::caught_code([&] { read_feature_cache(dir / "short.fmat"); }) ==
        ErrorCode::ShapeMismatch);

  CHECK(th::caught_code([&] { read_feature_cache(dir / "absent.fmat"); }) ==
        ErrorCode::IoFailure);
}
