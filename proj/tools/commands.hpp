#pragma once

#include "spider/documents.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace spider::cli {

enum ExitCode : int { kOk = 0, kIoError = 1, kValidationError = 2, kDegenerate = 3 };

enum class InputFormat { Auto, Csv, Json, Noaa };

struct HdrCommand {
  std::filesystem::path input;
  InputFormat format = InputFormat::Auto;
  AnalysisParameters params;
  std::filesystem::path out = ".";
};

struct FhopsCommand {
  std::filesystem::path analysis;
  std::optional<std::string> strategy;
  std::optional<std::uint64_t> seed;
  std::optional<double> frame_duration;
  std::filesystem::path out = ".";
};

struct KiviatCommand {
  std::filesystem::path analysis;
  std::string stack = "qoi";
  std::string colour = "hdr";
  std::optional<std::string> probe;
  std::string heights = "rank";
  std::string colormap = "viridis";
  double theta_max = 1.5707963267948966;
  double highlight = 0.8;
  std::optional<std::string> strategy;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out = ".";
};

struct SynthCommand {
  std::uint64_t seed = 0;
  std::size_t n = 200;
  std::size_t p = 4;
  std::size_t m = 51;
  std::size_t outliers = 0;
  std::filesystem::path out;
};

/// Each writes its artifacts under `out` (created if absent) and reports a
/// short summary on `log`.
void run_hdr(const HdrCommand& cmd, std::ostream& log);
void run_fhops(const FhopsCommand& cmd, std::ostream& log);
void run_kiviat(const KiviatCommand& cmd, std::ostream& log);
void run_synth(const SynthCommand& cmd, std::ostream& log);
/// Blocks until the server stops.
void run_serve(const std::filesystem::path& dir, const std::string& host, int port, std::ostream& log);

/// Parses argv, runs the subcommand and maps failures to exit codes.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spider::cli
