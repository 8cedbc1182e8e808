#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <stdexcept>

#include "sipd/dynamics.hpp"
#include "sipd/grid.hpp"
#include "sipd/payoffs.hpp"

namespace sipd {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitIo = 2 };

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  int width = 200;
  int height = 200;
  int rounds = 50;
  int min_rounds = 7;
  int generations = 200;
  PayoffValues payoffs = kCanonicalPayoffs;
  Mix mix{{StrategyKind::CSMSM, 0.5}, {StrategyKind::TFT, 0.5}};
  double p_slave = 0.7;
  std::uint64_t seed = 0;
  int snapshot_every = 0;
  int workers = 1;
  bool freeze_roles = false;
  bool stop_at_fixation = false;
  std::filesystem::path output_dir = "out";
};

// Throws ConfigError describing the first invalid field.
void validate_config(const RunConfig& config);

StepParams step_params(const RunConfig& config);
RunOptions run_options(const RunConfig& config);

// Random initial grid and simulation, no file output.
RunResult execute_run(const RunConfig& config);

// Entry point for the `sipd` tool: run | match | analyze | scenario.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sipd
