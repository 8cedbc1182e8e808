#include "sipd/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace sipd {

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void write_file(const std::filesystem::path& file, const std::string& content) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw OutputError("cannot open " + file.string() + " for writing");
  out << content;
  if (!out) throw OutputError("failed writing " + file.string());
}

}  // namespace

std::string stats_csv_header() {
  std::string h = "generation";
  for (StrategyKind k : kAllKinds) h += "," + std::string(to_string(k)) + "_frac";
  h += ",csmsm_master_frac,csmsm_slave_frac";
  for (std::size_t g = 0; g < kGroupCount; ++g) {
    h += "," + std::string(to_string(static_cast<PayoffGroup>(g))) + "_avg_payoff_per_move";
  }
  return h;
}

std::string stats_csv_row(const GenerationStats& s) {
  std::string row = std::to_string(s.generation);
  for (double f : s.kind_fraction) row += "," + fixed6(f);
  row += "," + fixed6(s.master_fraction) + "," + fixed6(s.slave_fraction);
  for (const auto& v : s.avg_payoff_per_move) {
    row += ",";
    if (v) row += fixed6(*v);
  }
  return row;
}

void write_stats_csv(std::ostream& out, const RunResult& result) {
  out << stats_csv_header() << '\n';
  for (const auto& s : result.stats) out << stats_csv_row(s) << '\n';
  out << stats_csv_row(result.final_occupancy) << '\n';
}

std::string snapshot_filename(std::uint64_t generation) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "gen_%06llu.txt", static_cast<unsigned long long>(generation));
  return buf;
}

std::string summary_text(const RunResult& result) {
  std::ostringstream out;
  out << "generations=" << result.final_grid.generation << '\n';
  out << "fixation_generation=";
  if (result.fixation_generation) {
    out << *result.fixation_generation;
  } else {
    out << "NONE";
  }
  out << '\n';
  for (StrategyKind k : kAllKinds) {
    out << "final_" << to_string(k) << "_frac=" << fixed6(result.final_occupancy.fraction(k))
        << '\n';
  }
  out << "final_csmsm_master_frac=" << fixed6(result.final_occupancy.master_fraction) << '\n';
  out << "final_csmsm_slave_frac=" << fixed6(result.final_occupancy.slave_fraction) << '\n';
  return out.str();
}

void write_run_outputs(const std::filesystem::path& dir, const RunResult& result) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw OutputError("cannot create " + dir.string() + ": " + ec.message());
  std::ostringstream csv;
  write_stats_csv(csv, result);
  write_file(dir / "stats.csv", csv.str());
  write_file(dir / "summary.txt", summary_text(result));
  if (!result.snapshots.empty()) {
    const auto snap_dir = dir / "snapshots";
    std::filesystem::create_directories(snap_dir, ec);
    if (ec) throw OutputError("cannot create " + snap_dir.string() + ": " + ec.message());
    for (const auto& snap : result.snapshots) {
      write_file(snap_dir / snapshot_filename(snap.generation), snap.text);
    }
  }
}

void write_cell_payoffs(const std::filesystem::path& file, const GridState& played) {
  std::ostringstream out;
  out << "x,y,cell,total_payoff\n";
  for (std::size_t i = 0; i < played.size(); ++i) {
    const CellState& c = played.cells[i];
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", c.total_payoff);
    out << played.x_of(i) << ',' << played.y_of(i) << ',' << to_string(c.phenotype()) << ','
        << buf << '\n';
  }
  write_file(file, out.str());
}

}  // namespace sipd
