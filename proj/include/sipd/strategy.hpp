#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sipd/payoffs.hpp"
#include "sipd/rng.hpp"

namespace sipd {

enum class StrategyKind : std::uint8_t { CSMSM, TFT, TFTT, GRIM, ALLC, ALLD, RANDOM, ADAPTIVE };

inline constexpr std::array<StrategyKind, 8> kAllKinds{
    StrategyKind::CSMSM, StrategyKind::TFT,  StrategyKind::TFTT,   StrategyKind::GRIM,
    StrategyKind::ALLC,  StrategyKind::ALLD, StrategyKind::RANDOM, StrategyKind::ADAPTIVE};
inline constexpr std::size_t kKindCount = kAllKinds.size();

enum class Role : std::uint8_t { Master, Slave };

std::string_view to_string(StrategyKind kind);
std::string_view to_string(Role role);
std::optional<StrategyKind> parse_kind(std::string_view token);
std::optional<Role> parse_role(std::string_view token);
// "CSMSM, TFT, ..." for error messages.
std::string valid_kind_tokens();

inline bool is_deterministic(StrategyKind kind) { return kind != StrategyKind::RANDOM; }

// A strategy kind together with its role (CSMSM only). Two cells with equal
// phenotypes behave identically in every deterministic match.
struct Phenotype {
  StrategyKind kind = StrategyKind::TFT;
  std::optional<Role> role;

  bool operator==(const Phenotype&) const = default;
};

inline constexpr Phenotype kMaster{StrategyKind::CSMSM, Role::Master};
inline constexpr Phenotype kSlave{StrategyKind::CSMSM, Role::Slave};

// "TFT", "CSMSM:MASTER", ...
std::string to_string(const Phenotype& ph);
// Accepts KIND or CSMSM:ROLE; a bare CSMSM means MASTER.
std::optional<Phenotype> parse_phenotype(std::string_view token);

// Opening sequence shared by every CSMSM.
inline constexpr std::array<Move, 5> kHandshake{Move::C, Move::D, Move::C, Move::C, Move::D};

class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class StrategyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// One player's per-match state. Drive it by alternating next_move() and
// observe(opponent_move); reset() returns it to round 0 for a new match.
//
// Behaviour per kind:
//   ALLC / ALLD   constant C / D.
//   RANDOM        C or D with probability 1/2 per round from its own stream.
//                 reset() rewinds the stream, so a replay repeats the draws.
//   TFT           C first, then the opponent's previous move.
//   TFTT          C unless the opponent defected in both of the last two rounds.
//   GRIM          C until the opponent's first D, then D.
//   ADAPTIVE      C,C,C,C,C,C,D,D,D,D, then whichever own move has the higher
//                 average own payoff so far in the match (C on ties).
//   CSMSM         handshake C,D,C,C,D checked round by round; any mismatch
//                 means D for the rest of the match. After recognition a
//                 master plays grim trigger (rounds >= 6 only); a slave plays
//                 D in round 6, then C forever against a master (opponent
//                 played C in round 6) or the reverse of the opponent's
//                 previous move against a slave.
class StrategyMachine {
 public:
  enum class Handshake : std::uint8_t { InProgress, Punish, Recognized };

  StrategyMachine(StrategyKind kind, std::optional<Role> role = std::nullopt,
                  std::optional<RngStream> stream = std::nullopt,
                  const PayoffValues& payoffs = kCanonicalPayoffs);

  StrategyKind kind() const { return kind_; }
  std::optional<Role> role() const { return role_; }
  int rounds_played() const { return round_; }
  bool fresh() const { return round_ == 0 && !pending_; }
  Handshake handshake() const { return handshake_; }

  Move next_move();
  void observe(Move opponent);
  void reset();

 private:
  Move decide() const;

  StrategyKind kind_;
  std::optional<Role> role_;
  std::optional<RngStream> initial_stream_;
  std::optional<RngStream> stream_;
  PayoffValues payoffs_;

  int round_ = 0;  // completed rounds
  bool pending_ = false;
  Move own_last_ = Move::C;
  Move opp_last_ = Move::C;
  Move opp_before_last_ = Move::C;
  bool triggered_ = false;
  Handshake handshake_ = Handshake::InProgress;
  Move opp_round6_ = Move::C;
  double sum_c_ = 0.0, sum_d_ = 0.0;
  int count_c_ = 0, count_d_ = 0;
};

// Checks the role/stream preconditions: role iff CSMSM, stream iff RANDOM.
StrategyMachine make_machine(StrategyKind kind, std::optional<Role> role = std::nullopt,
                             std::optional<RngStream> stream = std::nullopt,
                             const PayoffValues& payoffs = kCanonicalPayoffs);

}  // namespace sipd
