#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace harness {

struct WavData {
  std::uint32_t sample_rate = 0;
  std::uint16_t channels = 0;
  std::uint16_t bits_per_sample = 0;
  bool is_float = false;
  std::vector<double> mono;  // first channel, scaled to [-1, 1)
};

/// Reads RIFF/WAVE with PCM 16/24-bit or IEEE float32 samples.
/// Throws std::runtime_error on anything else.
WavData read_wav(const std::string& path);

/// Writes mono float32 WAV. Returns the number of samples outside [-1, 1].
std::size_t write_wav_float(const std::string& path, const std::vector<double>& samples,
                            std::uint32_t sample_rate);

/// Writes mono 16-bit PCM (used by the synthetic generator so that the
/// integer read path is exercised). Samples are clipped to [-1, 1].
void write_wav_pcm16(const std::string& path, const std::vector<double>& samples, std::uint32_t sample_rate);

}  // namespace harness
