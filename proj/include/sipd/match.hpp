#pragma once

#include <vector>

#include "sipd/payoffs.hpp"
#include "sipd/strategy.hpp"

namespace sipd {

// Shortest match for which the closed-form payoff tables apply (the
// master/slave transcripts contain (n - 6) terms).
inline constexpr int kClosedFormMinRounds = 7;

struct MatchResult {
  double payoff_a = 0.0;
  double payoff_b = 0.0;
  std::vector<Move> history_a;
  std::vector<Move> history_b;
  int rounds = 0;
};

struct MatchTotals {
  double payoff_a = 0.0;
  double payoff_b = 0.0;
};

class MatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Plays `rounds` simultaneous rounds between two freshly reset machines.
// Each round both machines emit a move before either observes the other's.
MatchResult play_match(StrategyMachine& a, StrategyMachine& b, int rounds, const PayoffValues& p);

// Same as play_match without recording histories.
MatchTotals play_match_totals(StrategyMachine& a, StrategyMachine& b, int rounds,
                              const PayoffValues& p);

}  // namespace sipd
