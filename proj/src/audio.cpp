// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dccrn/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace dccrn {

double AudioClip::rms() const {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (float v : samples) acc += static_cast<double>(v) * v;
  return std::sqrt(acc / samples.size());
}

float AudioClip::peak() const {
  float p = 0.0f;
  for (float v : samples) p = std::max(p, std::abs(v));
  return p;
}

namespace {

constexpr uint16_t kFormatPcm = 0x0001;
constexpr uint16_t kFormatFloat = 0x0003;

uint32_t read_u32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t read_u16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(v & 0xff);
  out.push_back((v >> 8) & 0xff);
  out.push_back((v >> 16) & 0xff);
  out.push_back((v >> 24) & 0xff);
}

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(v & 0xff);
  out.push_back((v >> 8) & 0xff);
}

}  // namespace

AudioClip read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("wav: cannot open '" + path + "'");
  std::vector<uint8_t> data((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
  if (data.size() < 44 || std::memcmp(data.data(), "RIFF", 4) != 0 ||
      std::memcmp(data.data() + 8, "WAVE", 4) != 0) {
    throw DataError("wav: '" + path + "' is not a RIFF/WAVE file");
  }

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  const uint8_t* samples = nullptr;
  uint32_t sample_bytes = 0;
  size_t pos = 12;
  while (pos + 8 <= data.size()) {
    const char* tag = reinterpret_cast<const char*>(data.data() + pos);
    const uint32_t size = read_u32(data.data() + pos + 4);
    const size_t body = pos + 8;
    if (body + size > data.size()) break;
    if (std::memcmp(tag, "fmt ", 4) == 0 && size >= 16) {
      format = read_u16(data.data() + body);
      channels = read_u16(data.data() + body + 2);
      rate = read_u32(data.data() + body + 4);
      bits = read_u16(data.data() + body + 14);
    } else if (std::memcmp(tag, "data", 4) == 0) {
      samples = data.data() + body;
      sample_bytes = size;
    }
    pos = body + size + (size & 1);
  }
  if (format == 0 || samples == nullptr) {
    throw DataError("wav: '" + path + "' has no fmt/data chunks");
  }
  if (channels != 1) {
    throw DataError("wav: '" + path + "' has " + std::to_string(channels) +
                    " channels, expected mono");
  }
  AudioClip clip;
  clip.sample_rate = static_cast<int>(rate);
  if (format == kFormatPcm && bits == 16) {
    const size_t n = sample_bytes / 2;
    clip.samples.resize(n);
    for (size_t i = 0; i < n; ++i) {
      int16_t v = static_cast<int16_t>(samples[2 * i] | (samples[2 * i + 1] << 8));
      clip.samples[i] = static_cast<float>(v) / 32768.0f;
    }
  } else if (format == kFormatFloat && bits == 32) {
    const size_t n = sample_bytes / 4;
    clip.samples.resize(n);
    std::memcpy(clip.samples.data(), samples, n * 4);
  } else {
    throw DataError("wav: '" + path + "' has unsupported encoding (format " +
                    std::to_string(format) + ", " + std::to_string(bits) +
                    " bits); expected PCM16 or float32");
  }
  for (float v : clip.samples) {
    if (!std::isfinite(v)) {
      throw DataError("wav: '" + path + "' contains non-finite samples");
    }
  }
  return clip;
}

void write_wav(const std::string& path, const AudioClip& clip,
               WavEncoding encoding) {
  const bool f32 = encoding == WavEncoding::kFloat32;
  const uint32_t bytes_per = f32 ? 4 : 2;
  const uint32_t data_size =
      static_cast<uint32_t>(clip.samples.size()) * bytes_per;
  std::vector<uint8_t> out;
  out.reserve(44 + data_size);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put_u32(out, 36 + data_size);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  put_u32(out, 16);
  put_u16(out, f32 ? kFormatFloat : kFormatPcm);
  put_u16(out, 1);
  put_u32(out, static_cast<uint32_t>(clip.sample_rate));
  put_u32(out, static_cast<uint32_t>(clip.sample_rate) * bytes_per);
  put_u16(out, static_cast<uint16_t>(bytes_per));
  put_u16(out, f32 ? 32 : 16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put_u32(out, data_size);
  if (f32) {
    const uint8_t* raw = reinterpret_cast<const uint8_t*>(clip.samples.data());
    out.insert(out.end(), raw, raw + data_size);
  } else {
    for (float v : clip.samples) {
      float clamped = std::min(1.0f, std::max(-1.0f, v));
      int32_t q = static_cast<int32_t>(std::lrintf(clamped * 32767.0f));
      put_u16(out, static_cast<uint16_t>(static_cast<int16_t>(q)));
    }
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("wav: cannot write '" + path + "'");
  os.write(reinterpret_cast<const char*>(out.data()),
           static_cast<std::streamsize>(out.size()));
}

void validate_clip(const AudioClip& clip, const std::string& context,
                   int expected_rate) {
  if (clip.sample_rate != expected_rate) {
    throw DataError(context + ": sample rate " +
                    std::to_string(clip.sample_rate) + " Hz, expected " +
                    std::to_string(expected_rate) + " Hz (resampling is out "
                    "of scope)");
  }
  if (clip.samples.empty()) throw DataError(context + ": empty clip");
}

}  // namespace dccrn
