#include "sipd/grid.hpp"

#include <cmath>
#include <sstream>

namespace sipd {

GridState make_grid(int width, int height, const Phenotype& fill) {
  if (width < 3 || height < 3) {
    throw GridError("grid must be at least 3x3 for 8 distinct neighbours, got " +
                    std::to_string(width) + "x" + std::to_string(height));
  }
  if (fill.role.has_value() != (fill.kind == StrategyKind::CSMSM)) {
    throw GridError("role must be set exactly for CSMSM cells");
  }
  GridState g;
  g.width = width;
  g.height = height;
  CellState cell;
  cell.set_phenotype(fill);
  g.cells.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), cell);
  return g;
}

std::array<std::size_t, 8> neighbors(const GridState& g, std::size_t idx) {
  const int x = g.x_of(idx);
  const int y = g.y_of(idx);
  const int xl = x == 0 ? g.width - 1 : x - 1;
  const int xr = x == g.width - 1 ? 0 : x + 1;
  const int yu = y == 0 ? g.height - 1 : y - 1;
  const int yd = y == g.height - 1 ? 0 : y + 1;
  return {g.index(xl, yu), g.index(x, yu), g.index(xr, yu), g.index(xl, y),
          g.index(xr, y),  g.index(xl, yd), g.index(x, yd), g.index(xr, yd)};
}

void validate_mix(const Mix& mix) {
  if (mix.empty()) throw GridError("mix is empty");
  double sum = 0.0;
  for (std::size_t i = 0; i < mix.size(); ++i) {
    const auto& [kind, frac] = mix[i];
    if (!std::isfinite(frac) || frac < 0.0) {
      throw GridError("mix fraction for " + std::string(to_string(kind)) + " must be >= 0");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (mix[j].first == kind) {
        throw GridError("mix lists " + std::string(to_string(kind)) + " twice");
      }
    }
    sum += frac;
  }
  if (std::fabs(sum - 1.0) > 1e-9) throw GridError("mix fractions must sum to 1");
}

Mix parse_mix(const std::string& text) {
  Mix mix;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::size_t colon = item.find(':');
    if (colon == std::string::npos) throw GridError("mix entry '" + item + "' is not KIND:fraction");
    const auto kind = parse_kind(item.substr(0, colon));
    if (!kind) {
      throw GridError("unknown strategy '" + item.substr(0, colon) + "' (valid: " +
                      valid_kind_tokens() + ")");
    }
    double frac = 0.0;
    try {
      std::size_t used = 0;
      const std::string num = item.substr(colon + 1);
      frac = std::stod(num, &used);
      if (used != num.size()) throw std::invalid_argument(num);
    } catch (const std::exception&) {
      throw GridError("bad fraction in mix entry '" + item + "'");
    }
    mix.emplace_back(*kind, frac);
  }
  validate_mix(mix);
  return mix;
}

GridState init_random(int width, int height, const Mix& mix, const RngPolicy& rng) {
  validate_mix(mix);
  GridState g = make_grid(width, height, {StrategyKind::TFT, std::nullopt});
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double u = rng.stream(StreamPurpose::Init, 0, i).uniform();
    // Last positive entry absorbs rounding in the cumulative sum.
    std::size_t pick = 0;
    double acc = 0.0;
    for (std::size_t k = 0; k < mix.size(); ++k) {
      if (mix[k].second <= 0.0) continue;
      pick = k;
      acc += mix[k].second;
      if (u < acc) break;
    }
    const StrategyKind kind = mix[pick].first;
    g.cells[i].kind = kind;
    g.cells[i].role = kind == StrategyKind::CSMSM ? std::optional<Role>(Role::Master) : std::nullopt;
  }
  return g;
}

bool homogeneous_kind(const GridState& g) {
  for (const CellState& c : g.cells) {
    if (c.kind != g.cells.front().kind) return false;
  }
  return true;
}

}  // namespace sipd
