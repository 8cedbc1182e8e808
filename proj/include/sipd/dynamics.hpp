#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sipd/grid.hpp"
#include "sipd/match.hpp"
#include "sipd/payoffs.hpp"
#include "sipd/rng.hpp"

namespace sipd {

// Payoff groups reported per generation: every non-CSMSM kind, then CSMSM
// masters, CSMSM slaves and all CSMSM.
enum class PayoffGroup : std::uint8_t {
  TFT, TFTT, GRIM, ALLC, ALLD, RANDOM, ADAPTIVE, CsmsmMaster, CsmsmSlave, Csmsm
};
inline constexpr std::size_t kGroupCount = 10;
std::string_view to_string(PayoffGroup group);

struct GenerationStats {
  std::uint64_t generation = 0;
  std::array<double, kKindCount> kind_fraction{};  // indexed like kAllKinds
  double master_fraction = 0.0;                    // of the whole population
  double slave_fraction = 0.0;
  // Mean payoff per move, total / (8 * rounds); empty when the group has no
  // cells or no matches were played.
  std::array<std::optional<double>, kGroupCount> avg_payoff_per_move{};

  double fraction(StrategyKind kind) const { return kind_fraction[static_cast<std::size_t>(kind)]; }
  std::optional<double> payoff(PayoffGroup group) const {
    return avg_payoff_per_move[static_cast<std::size_t>(group)];
  }
};

// Occupancy only; payoff columns left empty.
GenerationStats occupancy_stats(const GridState& g);

// Match totals for every ordered pair of deterministic phenotypes at a fixed
// (rounds, payoffs).
class PayoffCache {
 public:
  PayoffCache(int rounds, const PayoffValues& payoffs);

  MatchTotals lookup(const Phenotype& a, const Phenotype& b) const;

 private:
  static std::size_t slot(const Phenotype& ph);
  static constexpr std::size_t kSlots = kKindCount + 1;  // CSMSM split by role
  std::array<std::array<MatchTotals, kSlots>, kSlots> table_{};
};

struct StepParams {
  int rounds = 50;
  PayoffValues payoffs = kCanonicalPayoffs;
  double p_slave = 0.7;
  bool freeze_roles = false;
  int workers = 1;
  bool memoize = true;
};

void validate_step_params(const StepParams& params);

// Called after matches and before imitation with the played grid (roles
// already flipped, totals filled in).
using PlayedObserver = std::function<void(const GridState&)>;

// One generation: role flips, one match per adjacent pair, synchronous
// best-neighbour imitation. Stats describe the played (pre-imitation) grid.
GenerationStats step_generation(GridState& g, const StepParams& params, const RngPolicy& rng,
                                const PlayedObserver& on_played = {});

struct Snapshot {
  std::uint64_t generation = 0;
  std::string text;
};

struct RunOptions {
  int generations = 200;
  bool stop_when_homogeneous = false;
  int snapshot_every = 0;  // 0 = off
};

struct RunResult {
  GridState final_grid;
  std::vector<GenerationStats> stats;  // one per played generation
  GenerationStats final_occupancy;     // the grid after the last update
  std::vector<Snapshot> snapshots;
  std::optional<std::uint64_t> fixation_generation;
};

RunResult run(GridState g, const RunOptions& options, const StepParams& params,
              const RngPolicy& rng, const PlayedObserver& on_played = {});

// One character per cell, rows newline-separated:
// M/m CSMSM master/slave, T TFT, t TFTT, G GRIM, C ALLC, D ALLD, R RANDOM, A ADAPTIVE.
char snapshot_char(const Phenotype& ph);
std::optional<Phenotype> phenotype_from_char(char c);
std::string snapshot_text(const GridState& g);
// Rebuilds a grid (generation 0, zero totals) from snapshot text.
GridState parse_snapshot(const std::string& text);

}  // namespace sipd
