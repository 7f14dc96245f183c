// cli.hpp - command implementations behind the ewit executable. Each command
// returns a JSON report (or CSV text) and its process exit code.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ewit/witness.hpp"

namespace ewit::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kHardFailure = 1, kParse = 2, kDimension = 3 };

struct Options {
  std::uint64_t seed = 7;
  std::optional<std::size_t> samples;
  int floor_restarts = 32;
  double tol = 0.0;  ///< detection margin: a value counts as negative below -tol
  std::optional<NormMode> norm_mode;
  unsigned workers = 0;
};

struct Result {
  nlohmann::json report;  ///< null for CSV output
  std::string text;       ///< CSV body for scan
  int exit_code = kOk;
};

Result cmd_check(const std::filesystem::path& witness, const std::optional<std::string>& state,
                 const Options& opts);

/// case: bell-phi+, bell-psi-, w3, improve, nonlinear or all.
Result cmd_reproduce(const std::string& which, const Options& opts);

/// terms: "factor" (directions of the witness factors) or "pauli".
Result cmd_lvnm(const std::vector<std::filesystem::path>& witnesses, const std::string& terms,
                const Options& opts);

/// Directory of pair_<k>_<k'>.json files, sites numbered from 1.
Result cmd_gme(const std::filesystem::path& dir, const std::string& state, const Options& opts);

/// CSV with header p1,p2,p3,p4,val_w,val_wf,val_f.
Result cmd_scan(const Options& opts);

/// Shortest round-trip decimal form.
std::string format_double(double v);

/// Parses argv, runs the command, writes output, maps errors to exit codes.
int run(int argc, char** argv);

}  // namespace ewit::cli
