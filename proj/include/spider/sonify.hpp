#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <vector>

namespace spider {

inline constexpr double kDefaultBaseFrequency = 220.0;
inline constexpr double kDefaultMaxFrequency = 880.0;

/// Per-frame sine tones. Invariants: every frequency in [f_base, f_max],
/// 2 * fade < frame_duration, amplitude in (0, 1].
struct ToneTrack {
  std::vector<double> frequencies;
  double frame_duration = 0.25;
  double sample_rate = 44100.0;
  double amplitude = 0.5;
  double fade = 0.010;
  double f_base = kDefaultBaseFrequency;
  double f_max = kDefaultMaxFrequency;

  /// Throws ValidationError on a broken invariant.
  void validate() const;
  std::size_t samples_per_frame() const;
};

/// f_i = f_base + (f_max - f_base) * d_i / d_ref, d_ref = max distance.
/// All-zero distances map to f_base.
std::vector<double> distances_to_frequencies(const Eigen::VectorXd& distances,
                                             double f_base = kDefaultBaseFrequency,
                                             double f_max = kDefaultMaxFrequency);

/// Same mapping against an explicit d_ref (external references reuse the
/// dataset maximum). Distances above d_ref saturate at f_max.
std::vector<double> distances_to_frequencies(const Eigen::VectorXd& distances, double d_ref,
                                             double f_base, double f_max);

/// Concatenated per-frame tones with linear fade-in/out; each frame starts
/// at phase zero. Length = frames * round(frame_duration * sample_rate).
std::vector<double> synthesize(const ToneTrack& track);

/// Mono 16-bit PCM RIFF/WAVE. Samples are clipped to [-1, 1] and quantized
/// as round-half-away-from-zero(s * 32767).
void write_wav(const std::vector<double>& samples, std::uint32_t sample_rate,
               const std::filesystem::path& path);
std::vector<std::uint8_t> encode_wav(const std::vector<double>& samples, std::uint32_t sample_rate);

struct WavData {
  std::uint32_t sample_rate = 0;
  std::vector<std::int16_t> samples;
};

/// Reads the mono 16-bit PCM layout produced by write_wav.
WavData read_wav(const std::filesystem::path& path);
WavData decode_wav(const std::vector<std::uint8_t>& bytes);

}  // namespace spider
