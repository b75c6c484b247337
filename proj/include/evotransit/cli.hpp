#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "evotransit/engine.hpp"
#include "evotransit/onemax.hpp"
#include "evotransit/report.hpp"

namespace evotransit::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitDimensionMismatch = 3;
inline constexpr int kExitRuntime = 4;

struct SeedRange {
  std::uint64_t first = 0;
  std::uint64_t last = 0;  // inclusive
};

struct TransitionArgs {
  std::filesystem::path start;
  std::filesystem::path target;
  // CLI spelling, e.g. "asym+box".
  std::string operator_name = "asymmetric";
  RunConfig config;
  std::optional<SeedRange> seeds;
  std::optional<std::filesystem::path> out_dir;
  std::optional<int> gif_delay_ms;
  std::optional<std::filesystem::path> report_path;
};

enum class LabExperiment { Scaling, Drift };

struct OnemaxArgs {
  onemax::LabOperatorSpec op;
  LabExperiment experiment = LabExperiment::Scaling;
  std::vector<std::size_t> n_list{1024, 2048, 4096, 8192};
  std::size_t repeats = 50;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> csv;
  std::size_t drift_n = 10'000;
  std::vector<std::size_t> k_list{1000, 100};
  std::size_t samples = 1'000'000;
};

enum class Subcommand { None, Transition, Onemax };

struct CliInvocation {
  Subcommand subcommand = Subcommand::None;
  TransitionArgs transition;
  OnemaxArgs onemax;
  // Set when --help was requested; execute() prints it and exits 0.
  std::string help_text;
};

/// Parses `args` (without the program name) and validates every value.
/// Throws Error(UsageError) on unknown flags, missing required flags,
/// nonexistent input files or out-of-range values.
CliInvocation parse_and_validate(const std::vector<std::string>& args);

/// Maps an operator CLI name to an OperatorSpec kind and composite partner.
/// Throws Error(UsageError) for unknown names.
void apply_operator_name(std::string_view name, OperatorSpec& spec);

/// The transition config as echoed in report.json.
[[nodiscard]] Json config_echo(const TransitionArgs& args, std::uint64_t seed);

/// Command line that reproduces the single-seed run described by `args`.
[[nodiscard]] std::vector<std::string> reproduce_args(const TransitionArgs& args, std::uint64_t seed,
                                                      const std::optional<std::filesystem::path>& out_dir,
                                                      const std::filesystem::path& report_path);

int execute(const CliInvocation& invocation, std::ostream& out, std::ostream& err);

/// parse_and_validate + execute with error-to-exit-code mapping.
int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace evotransit::cli
