// include/antispoof/audio_io.hpp
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef ANTISPOOF_AUDIO_IO_HPP_
#define ANTISPOOF_AUDIO_IO_HPP_

#include <filesystem>
#include <vector>

#include "antispoof/mat.hpp"

namespace antispoof::audio {

// Raw mono trial waveform, samples normalized by 1/32768 so the full
// signed 16-bit range maps into [-1, 1).
struct SignalBuffer {
  std::vector<double> samples;
  int sample_rate = 0;
};

// Reads a RIFF/WAVE file. Only PCM, 16-bit, mono is accepted; anything
// else raises UnsupportedEncoding. No resampling.
SignalBuffer read_wav(const std::filesystem::path& path);

// Feature cache: ASCII magic "FMAT", rows (u32 LE), cols (u32 LE), then
// rows*cols IEEE-754 binary32 LE values, row-major. Values round-trip
// bit-exactly at 32-bit precision.
void write_feature_cache(const Mat& matrix, const std::filesystem::path& path);
Mat read_feature_cache(const std::filesystem::path& path);

// In-memory codec behind the cache files; also used for the parameter
// manifest blocks.
std::vector<unsigned char> encode_feature_block(const Mat& matrix);
Mat decode_feature_block(const unsigned char* data, std::size_t size);

}  // namespace antispoof::audio

#endif  // ANTISPOOF_AUDIO_IO_HPP_
