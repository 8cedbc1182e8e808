#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include <boost/rational.hpp>

#include "sipd/payoffs.hpp"
#include "sipd/strategy.hpp"

namespace sipd::analysis {

using Rational = boost::rational<std::int64_t>;

class AnalysisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Closed-form match total of `a` against `b` over n rounds. Covers the
// ordered pairs over {TFT, ALLD, CSMSM:MASTER, CSMSM:SLAVE}; anything else
// throws AnalysisError (use the match engine instead).
double pair_payoff(const Phenotype& a, const Phenotype& b, int n, const PayoffValues& p);
bool pair_covered(const Phenotype& a, const Phenotype& b);

// Eight-match totals of a TFT (k in 0..3) or ALLD (k in 0..2) with k CSMSM
// neighbours and the rest of its own kind.
double tft_payoff(int csmsm_neighbors, int n, const PayoffValues& p);
double alld_payoff(int csmsm_neighbors, int n, const PayoffValues& p);

// Master inside a 3x3 CSMSM cluster surrounded by TFT.
//   Center: 8 CSMSM neighbours, `slaves` in 0..8
//   Border: 5 CSMSM + 3 TFT neighbours, `slaves` in 0..5
//   Corner: 3 CSMSM + 5 TFT neighbours, `slaves` in 0..3
enum class MasterPosition { Center, Border, Corner };
double master_payoff(MasterPosition position, int slaves, int n, const PayoffValues& p);

// Master (or any CSMSM) of an isolated pair in an ALLD sea.
double pair_in_alld_payoff(const Phenotype& self, const Phenotype& partner, int n,
                           const PayoffValues& p);

// A threshold value; `exact` is set when all payoffs are integers.
struct Bound {
  double value = 0.0;
  std::optional<Rational> exact;

  std::string text() const;
};

struct Interval {
  Bound lower;
  Bound upper;
};

enum class Verdict { Grow, Hold, Shrink };
std::string_view to_string(Verdict v);

// Concrete slave counts for verdicts; unset fields produce no verdict.
struct ScenarioCounts {
  std::optional<int> center_slaves;  // m
  std::optional<int> border_slaves;  // l
  std::optional<int> corner_slaves;  // q
};

struct ThresholdReport {
  int rounds = 0;
  PayoffValues payoffs;

  // Center master beats a TFT with one CSMSM neighbour for every slave count
  // when n exceeds this.
  Bound center_n_star;
  // Border master beats the best TFT when l exceeds this.
  Bound border_grow_l_star;
  // Large-n limit of border_grow_l_star: 3(R-P)/(T-R).
  Bound border_grow_l_limit;
  // Border master beats its TFT neighbours but not the best TFT.
  Interval border_hold;
  Interval border_hold_limit;
  // Master of a master/slave pair beats the best ALLD when n exceeds this.
  Bound alld_invasion_n_star;

  bool center_protected = false;
  bool alld_invaded = false;
  std::optional<Verdict> center_verdict;
  std::optional<Verdict> border_verdict;
  std::optional<Verdict> corner_verdict;
};

ThresholdReport thresholds(int n, const PayoffValues& p, const ScenarioCounts& counts = {});

std::string render_text(const ThresholdReport& report);
// key,value rows with a header line.
std::string render_csv(const ThresholdReport& report);

}  // namespace sipd::analysis
