#include "harness/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace harness {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t le32(const unsigned char* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
}
std::uint16_t le16(const unsigned char* p) { return static_cast<std::uint16_t>(p[0] | p[1] << 8); }

void put32(std::ostream& os, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}
void put16(std::ostream& os, std::uint16_t v) {
  const unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
  os.write(reinterpret_cast<const char*>(b), 2);
}

void write_header(std::ostream& os, std::uint16_t format, std::uint16_t bits, std::uint32_t rate,
                  std::uint32_t frames) {
  const std::uint32_t bytes = frames * (bits / 8u);
  os.write("RIFF", 4);
  put32(os, 36 + bytes);
  os.write("WAVEfmt ", 8);
  put32(os, 16);
  put16(os, format);
  put16(os, 1);
  put32(os, rate);
  put32(os, rate * (bits / 8u));
  put16(os, static_cast<std::uint16_t>(bits / 8u));
  put16(os, bits);
  os.write("data", 4);
  put32(os, bytes);
}

}  // namespace

WavData read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_wav: cannot open " + path);
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < 12 || std::memcmp(buf.data(), "RIFF", 4) != 0 || std::memcmp(buf.data() + 8, "WAVE", 4) != 0)
    throw std::runtime_error("read_wav: not a RIFF/WAVE file: " + path);

  WavData out;
  std::uint16_t format = 0;
  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= buf.size()) {
    const unsigned char* chunk = buf.data() + pos;
    const std::uint32_t size = le32(chunk + 4);
    const std::size_t body = pos + 8;
    if (body + size > buf.size()) throw std::runtime_error("read_wav: truncated chunk in " + path);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) throw std::runtime_error("read_wav: short fmt chunk");
      format = le16(buf.data() + body);
      out.channels = le16(buf.data() + body + 2);
      out.sample_rate = le32(buf.data() + body + 4);
      out.bits_per_sample = le16(buf.data() + body + 14);
      // WAVE_FORMAT_EXTENSIBLE stores the real format tag in the sub-format GUID.
      if (format == kFormatExtensible && size >= 26) format = le16(buf.data() + body + 24);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt) throw std::runtime_error("read_wav: data chunk before fmt");
      if (out.channels == 0) throw std::runtime_error("read_wav: zero channels");
      const std::size_t width = out.bits_per_sample / 8u;
      const bool pcm = format == kFormatPcm && (out.bits_per_sample == 16 || out.bits_per_sample == 24);
      const bool flt = format == kFormatFloat && out.bits_per_sample == 32;
      if (!pcm && !flt) throw std::runtime_error("read_wav: unsupported sample format in " + path);
      out.is_float = flt;
      const std::size_t frame = width * out.channels;
      const std::size_t frames = size / frame;
      out.mono.resize(frames);
      for (std::size_t i = 0; i < frames; ++i) {
        const unsigned char* p = buf.data() + body + i * frame;
        if (flt) {
          float f;
          std::uint32_t bits = le32(p);
          std::memcpy(&f, &bits, 4);
          out.mono[i] = f;
        } else if (width == 2) {
          out.mono[i] = static_cast<std::int16_t>(le16(p)) / 32768.0;
        } else {
          std::int32_t v = static_cast<std::int32_t>(std::uint32_t(p[0]) << 8 | std::uint32_t(p[1]) << 16 |
                                                     std::uint32_t(p[2]) << 24) >> 8;
          out.mono[i] = v / 8388608.0;
        }
      }
      return out;
    }
    pos = body + size + (size & 1u);
  }
  throw std::runtime_error("read_wav: no data chunk in " + path);
}

std::size_t write_wav_float(const std::string& path, const std::vector<double>& samples, std::uint32_t rate) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_wav_float: cannot open " + path);
  write_header(os, kFormatFloat, 32, rate, static_cast<std::uint32_t>(samples.size()));
  std::size_t clipped = 0;
  for (double v : samples) {
    if (std::abs(v) > 1.0) ++clipped;
    const float f = static_cast<float>(v);
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    put32(os, bits);
  }
  if (!os) throw std::runtime_error("write_wav_float: write failed for " + path);
  return clipped;
}

void write_wav_pcm16(const std::string& path, const std::vector<double>& samples, std::uint32_t rate) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_wav_pcm16: cannot open " + path);
  write_header(os, kFormatPcm, 16, rate, static_cast<std::uint32_t>(samples.size()));
  for (double v : samples) {
    const double c = std::clamp(v, -1.0, 32767.0 / 32768.0);
    put16(os, static_cast<std::uint16_t>(static_cast<std::int16_t>(std::lround(c * 32768.0))));
  }
  if (!os) throw std::runtime_error("write_wav_pcm16: write failed for " + path);
}

}  // namespace harness
