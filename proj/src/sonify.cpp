#include "spider/sonify.hpp"

#include "spider/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>
#include <string>

namespace spider {

void ToneTrack::validate() const {
  if (!(f_base < f_max)) throw ValidationError("tone track needs f_base < f_max");
  if (!(sample_rate > 0.0)) throw ValidationError("sample_rate must be positive");
  if (!(frame_duration > 0.0)) throw ValidationError("frame_duration must be positive");
  if (!(amplitude > 0.0 && amplitude <= 1.0)) throw ValidationError("amplitude must lie in (0, 1]");
  if (!(fade >= 0.0) || !(2.0 * fade < frame_duration))
    throw ValidationError("fade must satisfy 0 <= 2 * fade < frame_duration");
  for (double f : frequencies)
    if (!(f >= f_base && f <= f_max))
      throw ValidationError("frequency " + std::to_string(f) + " Hz outside [f_base, f_max]");
}

std::size_t ToneTrack::samples_per_frame() const {
  return static_cast<std::size_t>(std::llround(frame_duration * sample_rate));
}

std::vector<double> distances_to_frequencies(const Eigen::VectorXd& distances, double f_base,
                                             double f_max) {
  const double d_ref = distances.size() > 0 ? distances.maxCoeff() : 0.0;
  return distances_to_frequencies(distances, d_ref, f_base, f_max);
}

std::vector<double> distances_to_frequencies(const Eigen::VectorXd& distances, double d_ref,
                                             double f_base, double f_max) {
  if (!(f_base < f_max)) throw ValidationError("distances_to_frequencies needs f_base < f_max");
  if (distances.size() > 0 && !(distances.minCoeff() >= 0.0))
    throw ValidationError("distances must be non-negative");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(distances.size()));
  for (double d : distances) {
    if (!(d_ref > 0.0)) {
      out.push_back(f_base);
      continue;
    }
    const double t = std::min(d / d_ref, 1.0);
    out.push_back(t >= 1.0 ? f_max : f_base + (f_max - f_base) * t);
  }
  return out;
}

std::vector<double> synthesize(const ToneTrack& track) {
  track.validate();
  const std::size_t per_frame = track.samples_per_frame();
  const double fade_samples = track.fade * track.sample_rate;
  std::vector<double> out;
  out.reserve(per_frame * track.frequencies.size());
  for (double freq : track.frequencies) {
    const double step = 2.0 * std::numbers::pi * freq / track.sample_rate;
    for (std::size_t k = 0; k < per_frame; ++k) {
      double env = 1.0;
      if (fade_samples > 0.0) {
        const double head = static_cast<double>(k) / fade_samples;
        const double tail = static_cast<double>(per_frame - 1 - k) / fade_samples;
        env = std::min({1.0, head, tail});
      }
      out.push_back(track.amplitude * env * std::sin(step * static_cast<double>(k)));
    }
  }
  return out;
}

namespace {

void put_u32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFFu));
}
void put_u16(std::vector<std::uint8_t>& b, std::uint16_t v) {
  b.push_back(static_cast<std::uint8_t>(v & 0xFFu));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
}
void put_tag(std::vector<std::uint8_t>& b, const char* tag) { b.insert(b.end(), tag, tag + 4); }

std::uint32_t get_u32(const std::vector<std::uint8_t>& b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | static_cast<std::uint32_t>(b[at + 1]) << 8 |
         static_cast<std::uint32_t>(b[at + 2]) << 16 | static_cast<std::uint32_t>(b[at + 3]) << 24;
}
std::uint16_t get_u16(const std::vector<std::uint8_t>& b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | b[at + 1] << 8);
}
bool tag_is(const std::vector<std::uint8_t>& b, std::size_t at, const char* tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

}  // namespace

std::vector<std::uint8_t> encode_wav(const std::vector<double>& samples, std::uint32_t sample_rate) {
  const auto data_bytes = static_cast<std::uint32_t>(2 * samples.size());
  std::vector<std::uint8_t> b;
  b.reserve(44 + data_bytes);
  put_tag(b, "RIFF");
  put_u32(b, 36 + data_bytes);
  put_tag(b, "WAVE");
  put_tag(b, "fmt ");
  put_u32(b, 16);
  put_u16(b, 1);  // PCM
  put_u16(b, 1);  // mono
  put_u32(b, sample_rate);
  put_u32(b, sample_rate * 2);
  put_u16(b, 2);
  put_u16(b, 16);
  put_tag(b, "data");
  put_u32(b, data_bytes);
  for (double s : samples) {
    const double clipped = std::clamp(s, -1.0, 1.0);
    const auto q = static_cast<std::int16_t>(std::lround(clipped * 32767.0));
    put_u16(b, static_cast<std::uint16_t>(q));
  }
  return b;
}

void write_wav(const std::vector<double>& samples, std::uint32_t sample_rate,
               const std::filesystem::path& path) {
  const auto bytes = encode_wav(samples, sample_rate);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("cannot write " + path.string());
}

WavData decode_wav(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 44 || !tag_is(bytes, 0, "RIFF") || !tag_is(bytes, 8, "WAVE") ||
      !tag_is(bytes, 12, "fmt ") || !tag_is(bytes, 36, "data"))
    throw ParseError("not a canonical 44-byte-header WAV file");
  if (get_u16(bytes, 20) != 1 || get_u16(bytes, 22) != 1 || get_u16(bytes, 34) != 16)
    throw ParseError("only mono 16-bit PCM WAV is supported");
  const auto data_bytes = get_u32(bytes, 40);
  if (bytes.size() < 44 + static_cast<std::size_t>(data_bytes) || data_bytes % 2 != 0)
    throw ParseError("truncated WAV data chunk");
  WavData out;
  out.sample_rate = get_u32(bytes, 24);
  out.samples.resize(data_bytes / 2);
  for (std::size_t k = 0; k < out.samples.size(); ++k)
    out.samples[k] = static_cast<std::int16_t>(get_u16(bytes, 44 + 2 * k));
  return out;
}

WavData read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_wav(bytes);
}

}  // namespace spider
