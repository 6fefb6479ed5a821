#pragma once

// Command-line experiments: config parsing, the four commands, exit codes.
//
//   oneway <witness|grover|gate|visibility|run> --config FILE [--out DIR]
//          [--seed U64] [--format json|csv|both]
//
// Exit codes: 0 success, 2 config or usage error, 1 internal error.

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "oneway/mbqc.hpp"
#include "oneway/photonics.hpp"

namespace oneway::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { Json, Csv, Both };

struct GroverOptions {
  mbqc::GroverMark mark;
  bool feedforward = true;
  std::uint64_t trials = 0;  ///< 0: exact distribution only
};

struct GateOptions {
  mbqc::ClusterKind cluster = mbqc::ClusterKind::Horseshoe;
  double alpha = 0.0;
  double beta = 0.0;
};

struct VisibilityOptions {
  int samples = 64;
};

struct ExperimentConfig {
  std::string experiment;  ///< empty: taken from the subcommand
  photonics::SourceParams source;
  std::optional<photonics::NoiseModel> noise;            ///< explicit parameters
  std::optional<std::array<double, 6>> fit_targets;      ///< or fit to these term values
  std::uint64_t seed = 1;
  double duration = 1.0;
  double rate = 1.2e4;
  int threads = 1;
  std::string output_dir = ".";
  std::string output_prefix;
  GroverOptions grover;
  GateOptions gate;
  VisibilityOptions visibility;
};

/// Parses YAML (or JSON) text. Unknown keys and out-of-range values raise
/// ConfigError naming the offending field.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

struct ResolvedNoise {
  photonics::NoiseModel model;
  bool fitted = false;
  double residual = 0.0;
};

ResolvedNoise resolve_noise(const ExperimentConfig& config);

/// Each command writes its files into `out_dir` and returns their paths.
std::vector<std::filesystem::path> cmd_witness(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                                               OutputFormat format);
std::vector<std::filesystem::path> cmd_grover(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                                              OutputFormat format);
std::vector<std::filesystem::path> cmd_gate(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                                            OutputFormat format);
std::vector<std::filesystem::path> cmd_visibility(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                                                  OutputFormat format);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace oneway::cli
