#include "sipd/strategy.hpp"

namespace sipd {

namespace {

constexpr std::array<Move, 10> kAdaptivePrefix{Move::C, Move::C, Move::C, Move::C, Move::C,
                                               Move::C, Move::D, Move::D, Move::D, Move::D};

}  // namespace

std::string_view to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::CSMSM: return "CSMSM";
    case StrategyKind::TFT: return "TFT";
    case StrategyKind::TFTT: return "TFTT";
    case StrategyKind::GRIM: return "GRIM";
    case StrategyKind::ALLC: return "ALLC";
    case StrategyKind::ALLD: return "ALLD";
    case StrategyKind::RANDOM: return "RANDOM";
    case StrategyKind::ADAPTIVE: return "ADAPTIVE";
  }
  return "?";
}

std::string_view to_string(Role role) { return role == Role::Master ? "MASTER" : "SLAVE"; }

std::optional<StrategyKind> parse_kind(std::string_view token) {
  for (StrategyKind k : kAllKinds) {
    if (to_string(k) == token) return k;
  }
  return std::nullopt;
}

std::optional<Role> parse_role(std::string_view token) {
  if (token == "MASTER") return Role::Master;
  if (token == "SLAVE") return Role::Slave;
  return std::nullopt;
}

std::string to_string(const Phenotype& ph) {
  std::string out(to_string(ph.kind));
  if (ph.role) {
    out += ':';
    out += to_string(*ph.role);
  }
  return out;
}

std::optional<Phenotype> parse_phenotype(std::string_view token) {
  const std::size_t colon = token.find(':');
  const auto kind = parse_kind(token.substr(0, colon));
  if (!kind) return std::nullopt;
  if (colon == std::string_view::npos) {
    if (*kind == StrategyKind::CSMSM) return kMaster;
    return Phenotype{*kind, std::nullopt};
  }
  if (*kind != StrategyKind::CSMSM) return std::nullopt;
  const auto role = parse_role(token.substr(colon + 1));
  if (!role) return std::nullopt;
  return Phenotype{*kind, *role};
}

std::string valid_kind_tokens() {
  std::string out;
  for (StrategyKind k : kAllKinds) {
    if (!out.empty()) out += ", ";
    out += to_string(k);
  }
  return out;
}

StrategyMachine::StrategyMachine(StrategyKind kind, std::optional<Role> role,
                                 std::optional<RngStream> stream, const PayoffValues& payoffs)
    : kind_(kind), role_(role), initial_stream_(stream), stream_(stream), payoffs_(payoffs) {
  if (role_ && kind_ != StrategyKind::CSMSM) {
    throw StrategyError("role given for non-CSMSM strategy " + std::string(to_string(kind_)));
  }
  if (!role_ && kind_ == StrategyKind::CSMSM) throw StrategyError("CSMSM requires a role");
  if (kind_ == StrategyKind::RANDOM && !stream_) throw StrategyError("RANDOM requires a stream");
  if (kind_ != StrategyKind::RANDOM && stream_) {
    throw StrategyError("stream given for deterministic strategy " + std::string(to_string(kind_)));
  }
}

StrategyMachine make_machine(StrategyKind kind, std::optional<Role> role,
                             std::optional<RngStream> stream, const PayoffValues& payoffs) {
  return StrategyMachine(kind, role, stream, payoffs);
}

void StrategyMachine::reset() {
  const StrategyKind kind = kind_;
  const std::optional<Role> role = role_;
  const std::optional<RngStream> stream = initial_stream_;
  const PayoffValues payoffs = payoffs_;
  *this = StrategyMachine(kind, role, stream, payoffs);
}

Move StrategyMachine::next_move() {
  if (pending_) throw ProtocolError("next_move called twice without observe");
  own_last_ = decide();
  if (kind_ == StrategyKind::RANDOM) own_last_ = ((*stream_)() >> 63) ? Move::C : Move::D;
  pending_ = true;
  return own_last_;
}

Move StrategyMachine::decide() const {
  const int round = round_ + 1;  // 1-based round being played
  switch (kind_) {
    case StrategyKind::ALLC: return Move::C;
    case StrategyKind::ALLD: return Move::D;
    case StrategyKind::RANDOM: return Move::C;  // drawn in next_move
    case StrategyKind::TFT: return round == 1 ? Move::C : opp_last_;
    case StrategyKind::TFTT:
      return round >= 3 && opp_last_ == Move::D && opp_before_last_ == Move::D ? Move::D : Move::C;
    case StrategyKind::GRIM: return triggered_ ? Move::D : Move::C;
    case StrategyKind::ADAPTIVE: {
      if (round <= static_cast<int>(kAdaptivePrefix.size())) return kAdaptivePrefix[round - 1];
      // avg(D) > avg(C), cross-multiplied so integer payoffs compare exactly.
      return sum_d_ * count_c_ > sum_c_ * count_d_ ? Move::D : Move::C;
    }
    case StrategyKind::CSMSM: {
      if (handshake_ == Handshake::Punish) return Move::D;
      if (round <= static_cast<int>(kHandshake.size())) return kHandshake[round - 1];
      if (*role_ == Role::Master) return triggered_ ? Move::D : Move::C;
      if (round == 6) return Move::D;
      return opp_round6_ == Move::C ? Move::C : flip(opp_last_);
    }
  }
  return Move::D;
}

void StrategyMachine::observe(Move opponent) {
  if (!pending_) throw ProtocolError("observe called before next_move");
  pending_ = false;
  ++round_;
  const int round = round_;

  switch (kind_) {
    case StrategyKind::GRIM:
      if (opponent == Move::D) triggered_ = true;
      break;
    case StrategyKind::ADAPTIVE: {
      const double earned = stage_payoff(own_last_, opponent, payoffs_).first;
      if (own_last_ == Move::C) {
        sum_c_ += earned;
        ++count_c_;
      } else {
        sum_d_ += earned;
        ++count_d_;
      }
      break;
    }
    case StrategyKind::CSMSM:
      if (handshake_ == Handshake::InProgress) {
        if (opponent != kHandshake[round - 1]) {
          handshake_ = Handshake::Punish;
        } else if (round == static_cast<int>(kHandshake.size())) {
          handshake_ = Handshake::Recognized;
        }
      } else if (handshake_ == Handshake::Recognized) {
        if (round == 6) opp_round6_ = opponent;
        if (opponent == Move::D) triggered_ = true;  // only consulted by masters
      }
      break;
    default:
      break;
  }

  opp_before_last_ = opp_last_;
  opp_last_ = opponent;
}

}  // namespace sipd
