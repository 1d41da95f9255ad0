// src/audio_io.cc
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "antispoof/audio_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

namespace antispoof::audio {

namespace {

std::vector<unsigned char> read_all_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::IoFailure, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) raise(ErrorCode::IoFailure, "read failed for " + path.string());
  return bytes;
}

std::uint32_t read_u32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

std::uint16_t read_u16le(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

void write_u32le(std::vector<unsigned char>& out, std::uint32_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 16) & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 24) & 0xff));
}

constexpr char kCacheMagic[4] = {'F', 'M', 'A', 'T'};

}  // namespace

SignalBuffer read_wav(const std::filesystem::path& path) {
  const auto bytes = read_all_bytes(path);
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    raise(ErrorCode::NotWav, path.string() + " is not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  std::uint16_t audio_format = 0, channels = 0, bits = 0;
  std::uint32_t sample_rate = 0;
  const unsigned char* data_chunk = nullptr;
  std::uint32_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* hdr = bytes.data() + pos;
    const std::uint32_t chunk_size = read_u32le(hdr + 4);
    const std::size_t body = pos + 8;
    if (body + chunk_size > bytes.size()) {
      raise(ErrorCode::TruncatedFile, "chunk extends past end of " + path.string());
    }
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (chunk_size < 16) raise(ErrorCode::TruncatedFile, "short fmt chunk");
      audio_format = read_u16le(bytes.data() + body);
      channels = read_u16le(bytes.data() + body + 2);
      sample_rate = read_u32le(bytes.data() + body + 4);
      bits = read_u16le(bytes.data() + body + 14);
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data_chunk = bytes.data() + body;
      data_size = chunk_size;
    }
    pos = body + chunk_size + (chunk_size & 1);  // chunks are word-aligned
  }

  if (!have_fmt) raise(ErrorCode::TruncatedFile, "missing fmt chunk");
  if (audio_format != 1 || channels != 1 || bits != 16) {
    raise(ErrorCode::UnsupportedEncoding,
          "only PCM 16-bit mono is accepted (" + path.string() + ")");
  }
  if (sample_rate == 0) raise(ErrorCode::UnsupportedEncoding, "zero sample rate");
  if (data_chunk == nullptr || data_size < 2) {
    raise(ErrorCode::TruncatedFile, "missing or empty data chunk");
  }

  SignalBuffer sig;
  sig.sample_rate = static_cast<int>(sample_rate);
  const std::size_t n = data_size / 2;
  sig.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint16_t raw = read_u16le(data_chunk + 2 * i);
    const std::int16_t value = static_cast<std::int16_t>(raw);
    sig.samples[i] = static_cast<double>(value) / 32768.0;
  }
  return sig;
}

std::vector<unsigned char> encode_feature_block(const Mat& matrix) {
  if (!matrix.all_finite()) {
    raise(ErrorCode::ShapeMismatch, "refusing to cache non-finite matrix");
  }
  std::vector<unsigned char> out;
  out.reserve(12 + matrix.size() * 4);
  out.insert(out.end(), kCacheMagic, kCacheMagic + 4);
  write_u32le(out, static_cast<std::uint32_t>(matrix.rows()));
  write_u32le(out, static_cast<std::uint32_t>(matrix.cols()));
  for (int r = 0; r < matrix.rows(); ++r) {
    for (int c = 0; c < matrix.cols(); ++c) {
      const float f = static_cast<float>(matrix(r, c));
      std::uint32_t u;
      std::memcpy(&u, &f, 4);
      write_u32le(out, u);
    }
  }
  return out;
}

Mat decode_feature_block(const unsigned char* data, std::size_t size) {
  if (size < 12 || std::memcmp(data, kCacheMagic, 4) != 0) {
    raise(ErrorCode::BadMagic, "feature cache magic mismatch");
  }
  const std::uint32_t rows = read_u32le(data + 4);
  const std::uint32_t cols = read_u32le(data + 8);
  const std::uint64_t want = static_cast<std::uint64_t>(rows) * cols;
  if (size != 12 + want * 4) {
    raise(ErrorCode::ShapeMismatch, "feature cache payload size mismatch");
  }
  Mat m(static_cast<int>(rows), static_cast<int>(cols));
  const unsigned char* p = data + 12;
  for (std::uint32_t r = 0; r < rows; ++r) {
    for (std::uint32_t c = 0; c < cols; ++c) {
      const std::uint32_t u = read_u32le(p);
      float f;
      std::memcpy(&f, &u, 4);
      m(static_cast<int>(r), static_cast<int>(c)) = static_cast<double>(f);
      p += 4;
    }
  }
  return m;
}

void write_feature_cache(const Mat& matrix, const std::filesystem::path& path) {
  const auto bytes = encode_feature_block(matrix);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorCode::IoFailure, "cannot open " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) raise(ErrorCode::IoFailure, "write failed for " + path.string());
}

Mat read_feature_cache(const std::filesystem::path& path) {
  const auto bytes = read_all_bytes(path);
  return decode_feature_block(bytes.data(), bytes.size());
}

}  // namespace antispoof::audio
