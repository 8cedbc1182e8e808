#include "sipd/match.hpp"

namespace sipd {

namespace {

template <typename OnRound>
MatchTotals drive(StrategyMachine& a, StrategyMachine& b, int rounds, const PayoffValues& p,
                  OnRound&& on_round) {
  if (rounds < 1) throw MatchError("match needs at least one round");
  if (!a.fresh() || !b.fresh()) throw MatchError("match started with a machine that was not reset");
  MatchTotals totals;
  for (int r = 0; r < rounds; ++r) {
    const Move move_a = a.next_move();
    const Move move_b = b.next_move();
    a.observe(move_b);
    b.observe(move_a);
    const auto [pa, pb] = stage_payoff(move_a, move_b, p);
    totals.payoff_a += pa;
    totals.payoff_b += pb;
    on_round(move_a, move_b);
  }
  return totals;
}

}  // namespace

MatchResult play_match(StrategyMachine& a, StrategyMachine& b, int rounds, const PayoffValues& p) {
  MatchResult result;
  if (rounds > 0) {
    result.history_a.reserve(static_cast<std::size_t>(rounds));
    result.history_b.reserve(static_cast<std::size_t>(rounds));
  }
  const MatchTotals totals = drive(a, b, rounds, p, [&](Move ma, Move mb) {
    result.history_a.push_back(ma);
    result.history_b.push_back(mb);
  });
  result.payoff_a = totals.payoff_a;
  result.payoff_b = totals.payoff_b;
  result.rounds = rounds;
  return result;
}

MatchTotals play_match_totals(StrategyMachine& a, StrategyMachine& b, int rounds,
                              const PayoffValues& p) {
  return drive(a, b, rounds, p, [](Move, Move) {});
}

}  // namespace sipd
