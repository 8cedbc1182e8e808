#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "scenarios.hpp"
#include "sipd/analysis.hpp"
#include "sipd/dynamics.hpp"
#include "sipd/scenario.hpp"

using namespace sipd;

namespace {

const Phenotype kTft{StrategyKind::TFT, std::nullopt};

std::set<std::size_t> as_set(const std::array<std::size_t, 8>& a) { return {a.begin(), a.end()}; }

Mix full_mix() {
  Mix mix;
  for (StrategyKind k : kAllKinds) mix.emplace_back(k, 1.0 / kKindCount);
  return mix;
}

std::vector<Phenotype> phenotypes(const GridState& g) {
  std::vector<Phenotype> out;
  for (const auto& c : g.cells) out.push_back(c.phenotype());
  return out;
}

StepParams frozen(int rounds) {
  StepParams p;
  p.rounds = rounds;
  p.freeze_roles = true;
  return p;
}

// Runs one generation and returns (played grid, next grid).
std::pair<GridState, GridState> one_step(GridState g, const StepParams& params,
                                         std::uint64_t seed = 1) {
  GridState played;
  step_generation(g, params, RngPolicy{seed}, [&](const GridState& s) { played = s; });
  return {played, g};
}

}  // namespace

TEST_CASE("neighbors on small tori") {
  const GridState g3 = make_grid(3, 3, kTft);
  const auto center = neighbors(g3, g3.index(1, 1));
  CHECK(center == std::array<std::size_t, 8>{0, 1, 2, 3, 5, 6, 7, 8});
  for (std::size_t i = 0; i < g3.size(); ++i) {
    auto s = as_set(neighbors(g3, i));
    CHECK(s.size() == 8);
    CHECK_FALSE(s.count(i));
  }
  const GridState g5 = make_grid(5, 5, kTft);
  const auto corner = neighbors(g5, 0);
  // NW, N, NE, W, E, SW, S, SE of (0, 0)
  CHECK(corner == std::array<std::size_t, 8>{g5.index(4, 4), g5.index(0, 4), g5.index(1, 4),
                                             g5.index(4, 0), g5.index(1, 0), g5.index(4, 1),
                                             g5.index(0, 1), g5.index(1, 1)});
  const GridState rect = make_grid(7, 4, kTft);
  for (std::size_t i = 0; i < rect.size(); ++i) {
    for (std::size_t j : neighbors(rect, i)) CHECK(as_set(neighbors(rect, j)).count(i));
  }
}

TEST_CASE("grids need at least 3x3") {
  CHECK_THROWS_AS(make_grid(2, 5, kTft), GridError);
  CHECK_THROWS_AS(make_grid(5, 0, kTft), GridError);
  CHECK_THROWS_AS(make_grid(5, 5, {StrategyKind::CSMSM, std::nullopt}), GridError);
}

TEST_CASE("init_random") {
  const GridState g = init_random(200, 200, {{StrategyKind::CSMSM, 0.5}, {StrategyKind::TFT, 0.5}},
                                  RngPolicy{3});
  const GenerationStats s = occupancy_stats(g);
  CHECK(s.fraction(StrategyKind::CSMSM) == doctest::Approx(0.5).epsilon(0.02));
  CHECK(s.master_fraction == s.fraction(StrategyKind::CSMSM));
  CHECK(s.slave_fraction == 0.0);
  CHECK(g.generation == 0);

  const GridState h = init_random(3, 3, {{StrategyKind::TFT, 1.0}}, RngPolicy{3});
  CHECK(homogeneous_kind(h));
  CHECK(h.cells[0].kind == StrategyKind::TFT);

  const GridState m = init_random(100, 100, parse_mix("CSMSM:0.2,ALLD:0.8"), RngPolicy{5});
  CHECK(occupancy_stats(m).fraction(StrategyKind::ALLD) == doctest::Approx(0.8).epsilon(0.02));

  const GridState again = init_random(100, 100, parse_mix("CSMSM:0.2,ALLD:0.8"), RngPolicy{5});
  CHECK(phenotypes(again) == phenotypes(m));
}

TEST_CASE("mix validation") {
  CHECK_THROWS_AS(parse_mix("CSMSM:0.5,TFT:0.4"), GridError);
  CHECK_THROWS_AS(parse_mix("CSMSM:1.5,TFT:-0.5"), GridError);
  CHECK_THROWS_AS(parse_mix("BOGUS:1"), GridError);
  CHECK_THROWS_AS(parse_mix("TFT:0.5,TFT:0.5"), GridError);
  CHECK_THROWS_AS(parse_mix("TFT"), GridError);
  CHECK_THROWS_AS(init_random(2, 2, parse_mix("TFT:1"), RngPolicy{}), GridError);
  CHECK(parse_mix("ALLC:0,TFT:1").size() == 2);
}

TEST_CASE("scenario parsing") {
  const ScenarioDescriptor d = parse_scenario_text(scenarios::kBorderMasterFourSlaves);
  CHECK(d.width == 9);
  CHECK(d.background == StrategyKind::TFT);
  CHECK(d.freeze_roles);
  const GridState g = init_scenario(d);
  CHECK(g.at(4, 3).phenotype() == kMaster);
  CHECK(g.at(4, 4).phenotype() == kMaster);
  CHECK(g.at(3, 3).phenotype() == kSlave);
  CHECK(g.at(2, 3).phenotype() == kTft);

  const GridState empty = init_scenario(parse_scenario_text("grid 5 4\nbackground ALLC\n"));
  CHECK(homogeneous_kind(empty));
  CHECK(empty.cells[0].kind == StrategyKind::ALLC);
  CHECK(homogeneous_kind(init_scenario(parse_scenario_text("grid 5 5\ncluster 1 1 0 3\n"))));
}

TEST_CASE("scenario errors carry line numbers") {
  auto line_of = [](const std::string& text) {
    try {
      init_scenario(parse_scenario_text(text));
    } catch (const ScenarioError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("grid 9 9\nbackground FOO\n") == 2);
  CHECK(line_of("grid 9 9\n\n# comment\ncluster 7 7 3 3\n") == 4);
  CHECK(line_of("grid 9 9\ncluster 1 1 2 2\nrole 5 5 SLAVE\n") == 3);
  CHECK(line_of("grid 9 9\ncluster 1 1 2 2\nrole 1 1 BOSS\n") == 3);
  CHECK(line_of("grid 9\n") == 1);
  CHECK(line_of("grid 9 9 9\n") == 1);
  CHECK(line_of("grid 2 2\n") == 1);
  CHECK(line_of("grid 9 9\nfreeze_roles maybe\n") == 2);
  CHECK(line_of("grid 9 9\nteleport 1 1\n") == 2);
  CHECK(line_of("background TFT\n") == 0);
}

TEST_CASE("homogeneous deterministic grids are absorbing") {
  for (StrategyKind k : kAllKinds) {
    if (!is_deterministic(k) || k == StrategyKind::CSMSM) continue;
    GridState g = make_grid(6, 5, {k, std::nullopt});
    const auto before = phenotypes(g);
    for (int i = 0; i < 3; ++i) step_generation(g, StepParams{}, RngPolicy{7});
    CHECK(phenotypes(g) == before);
    CHECK(g.generation == 3);
  }
}

TEST_CASE("cell totals are the sum of eight engine matches") {
  GridState g = init_random(7, 6, full_mix(), RngPolicy{11});
  std::replace_if(
      g.cells.begin(), g.cells.end(),
      [](const CellState& c) { return c.kind == StrategyKind::RANDOM; },
      CellState{StrategyKind::GRIM, std::nullopt, 0.0});
  StepParams params = frozen(23);
  params.payoffs = {7, 5, 2, -1};
  const auto [played, next] = one_step(g, params);
  for (std::size_t i = 0; i < played.size(); ++i) {
    double sum = 0;
    const Phenotype a = played.cells[i].phenotype();
    for (std::size_t j : neighbors(played, i)) {
      const Phenotype b = played.cells[j].phenotype();
      StrategyMachine ma(a.kind, a.role, std::nullopt, params.payoffs);
      StrategyMachine mb(b.kind, b.role, std::nullopt, params.payoffs);
      sum += play_match_totals(ma, mb, params.rounds, params.payoffs).payoff_a;
    }
    CHECK(played.cells[i].total_payoff == sum);
  }
}

TEST_CASE("border master with four slaves invades the TFT above it") {
  const GridState g = init_scenario(parse_scenario_text(scenarios::kBorderMasterFourSlaves));
  const auto [played, next] = one_step(g, frozen(50));
  CHECK(played.at(4, 3).total_payoff == 1238);
  CHECK(played.at(4, 3).total_payoff ==
        analysis::master_payoff(analysis::MasterPosition::Border, 4, 50, kCanonicalPayoffs));
  CHECK(played.at(4, 1).total_payoff == 1200);
  std::set<std::pair<int, int>> converted;
  for (int y = 0; y < 9; ++y) {
    for (int x = 0; x < 9; ++x) {
      if (g.at(x, y).kind == StrategyKind::TFT && next.at(x, y).kind != StrategyKind::TFT) {
        converted.insert({x, y});
        CHECK(next.at(x, y).phenotype() == kMaster);
      }
    }
  }
  CHECK(converted == std::set<std::pair<int, int>>{{3, 2}, {4, 2}, {5, 2}});
}

TEST_CASE("border master with three slaves holds without growing") {
  const GridState g = init_scenario(parse_scenario_text(scenarios::kBorderMasterThreeSlaves));
  const auto [played, next] = one_step(g, frozen(50));
  CHECK(played.at(4, 3).total_payoff == 1153);
  const auto before = occupancy_stats(g);
  const auto after = occupancy_stats(next);
  CHECK(after.fraction(StrategyKind::CSMSM) == before.fraction(StrategyKind::CSMSM));
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK((g.cells[i].kind == StrategyKind::CSMSM) == (next.cells[i].kind == StrategyKind::CSMSM));
  }
}

TEST_CASE("master/slave pair invades ALLD only when n exceeds the bound") {
  const GridState g = init_scenario(parse_scenario_text(scenarios::kPairInAlld));
  const auto [played, next] = one_step(g, frozen(50));
  CHECK(played.at(4, 4).total_payoff == 574);
  CHECK(played.at(4, 3).total_payoff == 408);
  for (std::size_t j : neighbors(g, g.index(4, 4))) {
    CHECK(next.cells[j].kind == StrategyKind::CSMSM);
  }
  // Cells touching only the slave stay ALLD.
  CHECK(next.at(6, 4).kind == StrategyKind::ALLD);

  const auto [played8, next8] = one_step(g, frozen(8));
  CHECK(played8.at(4, 4).total_payoff == 70);
  CHECK(played8.at(4, 3).total_payoff == 72);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.cells[i].kind == StrategyKind::ALLD) CHECK(next8.cells[i].kind == StrategyKind::ALLD);
  }
}

TEST_CASE("two masters invade ALLD at n = 50 but not at n = 8") {
  const GridState g = init_scenario(parse_scenario_text(scenarios::kTwoMastersInAlld));
  const auto [played, next] = one_step(g, frozen(50));
  CHECK(played.at(4, 4).total_payoff == 489);
  CHECK(next.at(3, 4).kind == StrategyKind::CSMSM);
  CHECK(next.at(6, 4).kind == StrategyKind::CSMSM);
  const auto [played8, next8] = one_step(g, frozen(8));
  CHECK(played8.at(4, 4).total_payoff == 69);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.cells[i].kind == StrategyKind::ALLD) CHECK(next8.cells[i].kind == StrategyKind::ALLD);
  }
  // Both masters lose to the 72-point ALLD cells beside them.
  CHECK(occupancy_stats(next8).fraction(StrategyKind::ALLD) == 1.0);
}

TEST_CASE("property: successors are prior phenotypes from the same neighbourhood") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    GridState g = init_random(12, 9, full_mix(), RngPolicy{seed});
    for (int gen = 0; gen < 4; ++gen) {
      const auto [played, next] = one_step(g, StepParams{}, seed);
      for (std::size_t i = 0; i < g.size(); ++i) {
        bool found = next.cells[i].phenotype() == played.cells[i].phenotype();
        for (std::size_t j : neighbors(g, i)) {
          found = found || next.cells[i].phenotype() == played.cells[j].phenotype();
        }
        CHECK(found);
        // A winner must not score below the cell it replaced.
        if (next.cells[i].phenotype() != played.cells[i].phenotype()) {
          double best = played.cells[i].total_payoff;
          for (std::size_t j : neighbors(g, i)) best = std::max(best, played.cells[j].total_payoff);
          CHECK(best > played.cells[i].total_payoff);
        }
      }
      g = next;
    }
  }
}

TEST_CASE("property: memoized and unmemoized generations are identical") {
  StepParams memo;
  StepParams plain;
  plain.memoize = false;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    GridState a = init_random(15, 11, full_mix(), RngPolicy{seed});
    GridState b = a;
    for (int gen = 0; gen < 5; ++gen) {
      const GenerationStats sa = step_generation(a, memo, RngPolicy{seed});
      const GenerationStats sb = step_generation(b, plain, RngPolicy{seed});
      CHECK(sa.kind_fraction == sb.kind_fraction);
      CHECK(sa.avg_payoff_per_move == sb.avg_payoff_per_move);
      CHECK(phenotypes(a) == phenotypes(b));
    }
  }
}

TEST_CASE("property: results do not depend on worker count") {
  const GridState start = init_random(31, 17, full_mix(), RngPolicy{99});
  std::vector<std::vector<Phenotype>> finals;
  std::vector<std::vector<GenerationStats>> all_stats;
  for (int workers : {1, 2, 3, 8}) {
    StepParams params;
    params.workers = workers;
    RunOptions opts;
    opts.generations = 6;
    const RunResult r = run(start, opts, params, RngPolicy{99});
    finals.push_back(phenotypes(r.final_grid));
    std::vector<GenerationStats> s = r.stats;
    all_stats.push_back(s);
  }
  for (std::size_t k = 1; k < finals.size(); ++k) {
    CHECK(finals[k] == finals[0]);
    REQUIRE(all_stats[k].size() == all_stats[0].size());
    for (std::size_t g = 0; g < all_stats[0].size(); ++g) {
      CHECK(all_stats[k][g].kind_fraction == all_stats[0][g].kind_fraction);
      CHECK(all_stats[k][g].avg_payoff_per_move == all_stats[0][g].avg_payoff_per_move);
      CHECK(all_stats[k][g].slave_fraction == all_stats[0][g].slave_fraction);
    }
  }
}

TEST_CASE("role flips") {
  GridState g = make_grid(20, 20, kMaster);
  StepParams params;
  params.p_slave = 1.0;
  GridState played;
  step_generation(g, params, RngPolicy{1}, [&](const GridState& s) { played = s; });
  CHECK(occupancy_stats(played).slave_fraction == 1.0);

  GridState h = make_grid(20, 20, kMaster);
  params.p_slave = 0.0;
  step_generation(h, params, RngPolicy{1}, [&](const GridState& s) { played = s; });
  CHECK(occupancy_stats(played).master_fraction == 1.0);

  GridState f = make_grid(20, 20, kMaster);
  params.p_slave = 0.7;
  params.freeze_roles = true;
  step_generation(f, params, RngPolicy{1}, [&](const GridState& s) { played = s; });
  CHECK(occupancy_stats(played).master_fraction == 1.0);

  // Slaves never turn back into masters by flipping.
  GridState s = make_grid(10, 10, kSlave);
  params.freeze_roles = false;
  step_generation(s, params, RngPolicy{1}, [&](const GridState& st) { played = st; });
  CHECK(occupancy_stats(played).slave_fraction == 1.0);
}

TEST_CASE("slave share settles near 70 percent") {
  GridState g = make_grid(60, 60, kMaster);
  RunOptions opts;
  opts.generations = 60;
  const RunResult r = run(g, opts, StepParams{}, RngPolicy{4});
  double share = 0;
  for (std::size_t k = r.stats.size() - 20; k < r.stats.size(); ++k) {
    share += r.stats[k].slave_fraction / r.stats[k].fraction(StrategyKind::CSMSM);
  }
  share /= 20;
  CHECK(share == doctest::Approx(0.7).epsilon(0.1 / 0.7));
}

TEST_CASE("run bookkeeping") {
  const GridState g = init_random(10, 10, parse_mix("CSMSM:0.5,TFT:0.5"), RngPolicy{2});
  RunOptions opts;
  opts.generations = 0;
  opts.snapshot_every = 1;
  const RunResult zero = run(g, opts, StepParams{}, RngPolicy{2});
  CHECK(zero.stats.empty());
  CHECK(phenotypes(zero.final_grid) == phenotypes(g));
  CHECK(zero.snapshots.size() == 1);
  CHECK_FALSE(zero.final_occupancy.payoff(PayoffGroup::TFT).has_value());

  opts.generations = 5;
  opts.snapshot_every = 2;
  const RunResult five = run(g, opts, StepParams{}, RngPolicy{2});
  REQUIRE(five.stats.size() == 5);
  for (std::size_t k = 0; k < 5; ++k) CHECK(five.stats[k].generation == k);
  CHECK(five.final_grid.generation == 5);
  CHECK(five.final_occupancy.generation == 5);
  CHECK(five.snapshots.size() == 3);  // 0, 2, 4

  const GridState tft = make_grid(5, 5, kTft);
  opts.stop_when_homogeneous = true;
  const RunResult stopped = run(tft, opts, StepParams{}, RngPolicy{2});
  CHECK(stopped.stats.empty());
  CHECK(stopped.fixation_generation == 0u);
}

TEST_CASE("snapshot text round trip") {
  const GridState g = init_random(13, 7, full_mix(), RngPolicy{8});
  const std::string text = snapshot_text(g);
  CHECK(std::count(text.begin(), text.end(), '\n') == 7);
  CHECK(phenotypes(parse_snapshot(text)) == phenotypes(g));
  CHECK_THROWS_AS(parse_snapshot("MMM\nMM\nMMM\n"), GridError);
  CHECK_THROWS_AS(parse_snapshot("MMM\nMXM\nMMM\n"), GridError);
}
