#pragma once

#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sipd/dynamics.hpp"

namespace sipd {

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// generation,<KIND>_frac...,csmsm_master_frac,csmsm_slave_frac,<GROUP>_avg_payoff_per_move...
std::string stats_csv_header();
// Six decimals; empty payoff fields when a group is absent or unplayed.
std::string stats_csv_row(const GenerationStats& s);
void write_stats_csv(std::ostream& out, const RunResult& result);

std::string snapshot_filename(std::uint64_t generation);

// "fixation_generation=<g|NONE>" plus the final kind and role fractions.
std::string summary_text(const RunResult& result);

// Writes stats.csv, summary.txt and snapshots/gen_XXXXXX.txt under dir.
// Throws OutputError when the directory cannot be created or written.
void write_run_outputs(const std::filesystem::path& dir, const RunResult& result);

// x,y,cell,total_payoff for every cell of a played grid.
void write_cell_payoffs(const std::filesystem::path& file, const GridState& played);

}  // namespace sipd
