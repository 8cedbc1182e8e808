#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sipd/rng.hpp"
#include "sipd/strategy.hpp"

namespace sipd {

class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CellState {
  StrategyKind kind = StrategyKind::TFT;
  std::optional<Role> role;  // set iff kind == CSMSM
  double total_payoff = 0.0;

  Phenotype phenotype() const { return {kind, role}; }
  void set_phenotype(const Phenotype& ph) {
    kind = ph.kind;
    role = ph.role;
  }
};

// Row-major toroidal lattice; cell (x, y) lives at y * width + x.
struct GridState {
  int width = 0;
  int height = 0;
  std::vector<CellState> cells;
  std::uint64_t generation = 0;

  std::size_t size() const { return cells.size(); }
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(x);
  }
  int x_of(std::size_t idx) const { return static_cast<int>(idx % static_cast<std::size_t>(width)); }
  int y_of(std::size_t idx) const { return static_cast<int>(idx / static_cast<std::size_t>(width)); }
  CellState& at(int x, int y) { return cells[index(x, y)]; }
  const CellState& at(int x, int y) const { return cells[index(x, y)]; }
};

// Homogeneous grid; throws GridError unless width, height >= 3.
GridState make_grid(int width, int height, const Phenotype& fill);

// Moore neighbours under toroidal wrap in scan order NW, N, NE, W, E, SW, S, SE.
std::array<std::size_t, 8> neighbors(const GridState& g, std::size_t idx);

using Mix = std::vector<std::pair<StrategyKind, double>>;

// "CSMSM:0.5,TFT:0.5". Throws GridError on bad tokens or fractions.
Mix parse_mix(const std::string& text);
void validate_mix(const Mix& mix);

// Each cell's kind drawn independently from the mix; CSMSM cells start as
// masters; generation 0.
GridState init_random(int width, int height, const Mix& mix, const RngPolicy& rng);

bool homogeneous_kind(const GridState& g);

}  // namespace sipd
