#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace sipd {

enum class Move : std::uint8_t { C, D };

inline char to_char(Move m) { return m == Move::C ? 'C' : 'D'; }
inline Move flip(Move m) { return m == Move::C ? Move::D : Move::C; }

// Stage-game payoffs. Integer-valued inputs accumulate exactly in a double
// for any realistic match length.
struct PayoffValues {
  double T = 5.0;  // temptation
  double R = 3.0;  // reward
  double P = 1.0;  // punishment
  double S = 0.0;  // sucker

  bool operator==(const PayoffValues&) const = default;
};

inline constexpr PayoffValues kCanonicalPayoffs{5.0, 3.0, 1.0, 0.0};

class PayoffError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Throws PayoffError naming the violated inequality unless T > R > P > S and
// 2R > S + T hold strictly.
PayoffValues validate_payoffs(const PayoffValues& p);

// Parses "T,R,P,S" and validates.
PayoffValues parse_payoffs(const std::string& text);

inline std::pair<double, double> stage_payoff(Move a, Move b, const PayoffValues& p) {
  if (a == Move::C) return b == Move::C ? std::pair{p.R, p.R} : std::pair{p.S, p.T};
  return b == Move::C ? std::pair{p.T, p.S} : std::pair{p.P, p.P};
}

}  // namespace sipd
