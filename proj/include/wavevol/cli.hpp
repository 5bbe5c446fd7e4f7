// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wavevol/error.hpp"

namespace wavevol::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

ExitCode exit_code_for(ErrorCode code) noexcept;

/// Flags shared by every subcommand; unset values fall back to the config
/// file, then to built-in defaults.
struct Options {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> paths;
  std::vector<std::string> estimators;
  std::optional<double> interval;
  std::optional<int> levels;
  std::filesystem::path out = "out";
  std::optional<std::filesystem::path> input;
  std::vector<std::string> argv;
};

/// Each command writes its outputs and manifest.json into options.out.
void cmd_simulate(const Options& options);
void cmd_estimate(const Options& options);
void cmd_decompose(const Options& options);
void cmd_study(const std::string& kind, const Options& options);

/// Parses argv, dispatches, and maps failures to exit codes.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace wavevol::cli
