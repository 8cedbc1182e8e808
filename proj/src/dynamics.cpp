#include "sipd/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

namespace sipd {

namespace {

// Splits [0, n) into contiguous chunks, one per worker. Each index is handled
// by exactly one worker, so writes to per-index outputs never race.
template <typename F>
void parallel_for(int workers, std::size_t n, F&& body) {
  const std::size_t w = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1,
                                                std::max<std::size_t>(n, 1));
  if (w == 1) {
    body(std::size_t{0}, n);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(w - 1);
  const std::size_t chunk = (n + w - 1) / w;
  for (std::size_t k = 1; k < w; ++k) {
    const std::size_t begin = std::min(n, k * chunk);
    const std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  body(std::size_t{0}, std::min(n, chunk));
}

StrategyMachine machine_for(const Phenotype& ph, const RngPolicy& rng, std::uint64_t generation,
                            std::uint64_t stream_index, const PayoffValues& payoffs) {
  std::optional<RngStream> stream;
  if (ph.kind == StrategyKind::RANDOM) {
    stream = rng.stream(StreamPurpose::Match, generation, stream_index);
  }
  return StrategyMachine(ph.kind, ph.role, stream, payoffs);
}

// Forward directions E, SW, S, SE are scan positions 4..7; the reverse of
// position k is 7 - k.
constexpr std::size_t kForward = 4;

}  // namespace

std::string_view to_string(PayoffGroup group) {
  switch (group) {
    case PayoffGroup::TFT: return "TFT";
    case PayoffGroup::TFTT: return "TFTT";
    case PayoffGroup::GRIM: return "GRIM";
    case PayoffGroup::ALLC: return "ALLC";
    case PayoffGroup::ALLD: return "ALLD";
    case PayoffGroup::RANDOM: return "RANDOM";
    case PayoffGroup::ADAPTIVE: return "ADAPTIVE";
    case PayoffGroup::CsmsmMaster: return "CSMSM_MASTER";
    case PayoffGroup::CsmsmSlave: return "CSMSM_SLAVE";
    case PayoffGroup::Csmsm: return "CSMSM";
  }
  return "?";
}

namespace {

PayoffGroup group_of(const CellState& c) {
  switch (c.kind) {
    case StrategyKind::CSMSM:
      return c.role == Role::Slave ? PayoffGroup::CsmsmSlave : PayoffGroup::CsmsmMaster;
    case StrategyKind::TFT: return PayoffGroup::TFT;
    case StrategyKind::TFTT: return PayoffGroup::TFTT;
    case StrategyKind::GRIM: return PayoffGroup::GRIM;
    case StrategyKind::ALLC: return PayoffGroup::ALLC;
    case StrategyKind::ALLD: return PayoffGroup::ALLD;
    case StrategyKind::RANDOM: return PayoffGroup::RANDOM;
    case StrategyKind::ADAPTIVE: return PayoffGroup::ADAPTIVE;
  }
  return PayoffGroup::TFT;
}

GenerationStats collect_stats(const GridState& g, std::optional<int> rounds) {
  GenerationStats s;
  s.generation = g.generation;
  std::array<std::size_t, kKindCount> kind_count{};
  std::array<std::size_t, kGroupCount> group_count{};
  std::array<double, kGroupCount> group_sum{};
  std::size_t masters = 0;
  std::size_t slaves = 0;
  for (const CellState& c : g.cells) {
    ++kind_count[static_cast<std::size_t>(c.kind)];
    const auto grp = static_cast<std::size_t>(group_of(c));
    ++group_count[grp];
    group_sum[grp] += c.total_payoff;
    if (c.kind == StrategyKind::CSMSM) {
      const auto all = static_cast<std::size_t>(PayoffGroup::Csmsm);
      ++group_count[all];
      group_sum[all] += c.total_payoff;
      (c.role == Role::Slave ? slaves : masters) += 1;
    }
  }
  const auto n = static_cast<double>(g.size());
  for (std::size_t k = 0; k < kKindCount; ++k) s.kind_fraction[k] = static_cast<double>(kind_count[k]) / n;
  s.master_fraction = static_cast<double>(masters) / n;
  s.slave_fraction = static_cast<double>(slaves) / n;
  if (rounds) {
    const double moves = 8.0 * *rounds;
    for (std::size_t k = 0; k < kGroupCount; ++k) {
      if (group_count[k] > 0) {
        s.avg_payoff_per_move[k] = group_sum[k] / static_cast<double>(group_count[k]) / moves;
      }
    }
  }
  return s;
}

}  // namespace

GenerationStats occupancy_stats(const GridState& g) { return collect_stats(g, std::nullopt); }

PayoffCache::PayoffCache(int rounds, const PayoffValues& payoffs) {
  std::vector<Phenotype> phenotypes;
  for (StrategyKind k : kAllKinds) {
    if (k == StrategyKind::RANDOM) continue;
    if (k == StrategyKind::CSMSM) {
      phenotypes.push_back(kMaster);
      phenotypes.push_back(kSlave);
    } else {
      phenotypes.push_back({k, std::nullopt});
    }
  }
  for (const Phenotype& a : phenotypes) {
    for (const Phenotype& b : phenotypes) {
      StrategyMachine ma(a.kind, a.role, std::nullopt, payoffs);
      StrategyMachine mb(b.kind, b.role, std::nullopt, payoffs);
      table_[slot(a)][slot(b)] = play_match_totals(ma, mb, rounds, payoffs);
    }
  }
}

std::size_t PayoffCache::slot(const Phenotype& ph) {
  if (ph.kind == StrategyKind::CSMSM && ph.role == Role::Slave) return kKindCount;
  return static_cast<std::size_t>(ph.kind);
}

MatchTotals PayoffCache::lookup(const Phenotype& a, const Phenotype& b) const {
  if (!is_deterministic(a.kind) || !is_deterministic(b.kind)) {
    throw std::logic_error("PayoffCache holds deterministic pairs only");
  }
  return table_[slot(a)][slot(b)];
}

void validate_step_params(const StepParams& params) {
  if (params.rounds < 1) throw GridError("rounds must be >= 1");
  validate_payoffs(params.payoffs);
  if (!(params.p_slave >= 0.0 && params.p_slave <= 1.0)) {
    throw GridError("p_slave must be in [0, 1]");
  }
  if (params.workers < 1) throw GridError("workers must be >= 1");
}

namespace {

GenerationStats step_with_cache(GridState& g, const StepParams& params, const RngPolicy& rng,
                                const PayoffCache* cache, const PlayedObserver& on_played) {
  const std::size_t n = g.size();
  const std::uint64_t gen = g.generation;

  // Role flips.
  if (!params.freeze_roles && params.p_slave > 0.0) {
    parallel_for(params.workers, n, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        CellState& c = g.cells[i];
        if (c.kind == StrategyKind::CSMSM && c.role == Role::Master &&
            rng.stream(StreamPurpose::RoleFlip, gen, i).bernoulli(params.p_slave)) {
          c.role = Role::Slave;
        }
      }
    });
  }

  std::vector<std::array<std::size_t, 8>> nbrs(n);
  for (std::size_t i = 0; i < n; ++i) nbrs[i] = neighbors(g, i);

  // One match per edge (cell, forward direction); the cell is player A.
  std::vector<MatchTotals> edges(n * kForward);
  parallel_for(params.workers, n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Phenotype a = g.cells[i].phenotype();
      for (std::size_t d = 0; d < kForward; ++d) {
        const std::size_t e = i * kForward + d;
        const Phenotype b = g.cells[nbrs[i][kForward + d]].phenotype();
        if (cache && is_deterministic(a.kind) && is_deterministic(b.kind)) {
          edges[e] = cache->lookup(a, b);
          continue;
        }
        StrategyMachine ma = machine_for(a, rng, gen, 2 * e, params.payoffs);
        StrategyMachine mb = machine_for(b, rng, gen, 2 * e + 1, params.payoffs);
        edges[e] = play_match_totals(ma, mb, params.rounds, params.payoffs);
      }
    }
  });

  // Totals summed in scan order.
  parallel_for(params.workers, n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double total = 0.0;
      for (std::size_t k = 0; k < 8; ++k) {
        if (k < kForward) {
          total += edges[nbrs[i][k] * kForward + (7 - k - kForward)].payoff_b;
        } else {
          total += edges[i * kForward + (k - kForward)].payoff_a;
        }
      }
      g.cells[i].total_payoff = total;
    }
  });

  GenerationStats stats = collect_stats(g, params.rounds);
  if (on_played) on_played(g);

  // Synchronous imitation of the strictly best neighbour.
  std::vector<CellState> next(n);
  parallel_for(params.workers, n, [&](std::size_t begin, std::size_t end) {
    std::array<std::size_t, 8> best{};
    for (std::size_t i = begin; i < end; ++i) {
      const double own = g.cells[i].total_payoff;
      double top = own;
      std::size_t count = 0;
      for (std::size_t j : nbrs[i]) {
        const double t = g.cells[j].total_payoff;
        if (t > top) {
          top = t;
          count = 0;
        }
        if (t == top && t > own) best[count++] = j;
      }
      next[i].set_phenotype(g.cells[i].phenotype());
      if (count == 1) {
        next[i].set_phenotype(g.cells[best[0]].phenotype());
      } else if (count > 1) {
        RngStream s = rng.stream(StreamPurpose::Update, gen, i);
        next[i].set_phenotype(g.cells[best[s.below(count)]].phenotype());
      }
    }
  });
  g.cells = std::move(next);
  ++g.generation;
  return stats;
}

}  // namespace

GenerationStats step_generation(GridState& g, const StepParams& params, const RngPolicy& rng,
                                const PlayedObserver& on_played) {
  validate_step_params(params);
  std::optional<PayoffCache> cache;
  if (params.memoize) cache.emplace(params.rounds, params.payoffs);
  return step_with_cache(g, params, rng, cache ? &*cache : nullptr, on_played);
}

RunResult run(GridState g, const RunOptions& options, const StepParams& params,
              const RngPolicy& rng, const PlayedObserver& on_played) {
  validate_step_params(params);
  if (options.generations < 0) throw GridError("generations must be >= 0");
  if (options.snapshot_every < 0) throw GridError("snapshot interval must be >= 0");
  std::optional<PayoffCache> cache;
  if (params.memoize) cache.emplace(params.rounds, params.payoffs);

  RunResult result;
  auto wants_snapshot = [&](std::uint64_t gen) {
    return options.snapshot_every > 0 &&
           gen % static_cast<std::uint64_t>(options.snapshot_every) == 0;
  };
  auto note_fixation = [&](const GenerationStats& s) {
    if (result.fixation_generation) return;
    for (double f : s.kind_fraction) {
      if (f == 1.0) result.fixation_generation = s.generation;
    }
  };

  for (int step = 0; step < options.generations; ++step) {
    if (options.stop_when_homogeneous && homogeneous_kind(g)) break;
    const bool snap = wants_snapshot(g.generation);
    GenerationStats s = step_with_cache(g, params, rng, cache ? &*cache : nullptr,
                                        [&](const GridState& played) {
                                          if (snap) {
                                            result.snapshots.push_back(
                                                {played.generation, snapshot_text(played)});
                                          }
                                          if (on_played) on_played(played);
                                        });
    note_fixation(s);
    result.stats.push_back(s);
  }
  for (CellState& c : g.cells) c.total_payoff = 0.0;
  result.final_occupancy = occupancy_stats(g);
  note_fixation(result.final_occupancy);
  if (wants_snapshot(g.generation)) result.snapshots.push_back({g.generation, snapshot_text(g)});
  result.final_grid = std::move(g);
  return result;
}

char snapshot_char(const Phenotype& ph) {
  switch (ph.kind) {
    case StrategyKind::CSMSM: return ph.role == Role::Slave ? 'm' : 'M';
    case StrategyKind::TFT: return 'T';
    case StrategyKind::TFTT: return 't';
    case StrategyKind::GRIM: return 'G';
    case StrategyKind::ALLC: return 'C';
    case StrategyKind::ALLD: return 'D';
    case StrategyKind::RANDOM: return 'R';
    case StrategyKind::ADAPTIVE: return 'A';
  }
  return '?';
}

std::optional<Phenotype> phenotype_from_char(char c) {
  switch (c) {
    case 'M': return kMaster;
    case 'm': return kSlave;
    case 'T': return Phenotype{StrategyKind::TFT, std::nullopt};
    case 't': return Phenotype{StrategyKind::TFTT, std::nullopt};
    case 'G': return Phenotype{StrategyKind::GRIM, std::nullopt};
    case 'C': return Phenotype{StrategyKind::ALLC, std::nullopt};
    case 'D': return Phenotype{StrategyKind::ALLD, std::nullopt};
    case 'R': return Phenotype{StrategyKind::RANDOM, std::nullopt};
    case 'A': return Phenotype{StrategyKind::ADAPTIVE, std::nullopt};
    default: return std::nullopt;
  }
}

std::string snapshot_text(const GridState& g) {
  std::string out;
  out.reserve(g.size() + static_cast<std::size_t>(g.height));
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) out += snapshot_char(g.at(x, y).phenotype());
    out += '\n';
  }
  return out;
}

GridState parse_snapshot(const std::string& text) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(line);
  }
  if (rows.empty()) throw GridError("empty snapshot");
  const int width = static_cast<int>(rows.front().size());
  GridState g = make_grid(width, static_cast<int>(rows.size()), {StrategyKind::TFT, std::nullopt});
  for (int y = 0; y < g.height; ++y) {
    if (static_cast<int>(rows[y].size()) != width) throw GridError("ragged snapshot rows");
    for (int x = 0; x < width; ++x) {
      const auto ph = phenotype_from_char(rows[y][x]);
      if (!ph) throw GridError(std::string("unknown snapshot character '") + rows[y][x] + "'");
      g.at(x, y).set_phenotype(*ph);
    }
  }
  return g;
}

}  // namespace sipd
