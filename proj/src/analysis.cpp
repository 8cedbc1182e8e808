#include "sipd/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace sipd::analysis {

namespace {

void require_rounds(int n) {
  if (n < 7) throw AnalysisError("closed forms need n >= 7, got " + std::to_string(n));
}

void require_range(const char* what, int value, int lo, int hi) {
  if (value < lo || value > hi) {
    throw AnalysisError(std::string(what) + " must be in [" + std::to_string(lo) + ", " +
                        std::to_string(hi) + "], got " + std::to_string(value));
  }
}

enum class Behavior { Tft, Alld, Master, Slave };

std::optional<Behavior> behavior_of(const Phenotype& ph) {
  switch (ph.kind) {
    case StrategyKind::TFT: return Behavior::Tft;
    case StrategyKind::ALLD: return Behavior::Alld;
    case StrategyKind::CSMSM:
      return ph.role == Role::Slave ? Behavior::Slave : Behavior::Master;
    default: return std::nullopt;
  }
}

// Totals shared by several formulas.
double tft_vs_csmsm(int n, const PayoffValues& p) { return p.R + (n - 2) * p.P + p.S; }
double csmsm_vs_tft(int n, const PayoffValues& p) { return p.T + p.R + (n - 2) * p.P; }
double master_vs_master(int n, const PayoffValues& p) { return (n - 2) * p.R + 2 * p.P; }
double master_vs_slave(int n, const PayoffValues& p) {
  return (n - 6) * p.T + 3 * p.R + 2 * p.P + p.S;
}
double slave_vs_master(int n, const PayoffValues& p) {
  return p.T + 3 * p.R + 2 * p.P + (n - 6) * p.S;
}
// Alternating C/D after the round-6 mutual defection; (nR + nP)/2 for even n.
double slave_vs_slave(int n, const PayoffValues& p) { return ((n + 1) / 2) * p.R + (n / 2) * p.P; }

std::optional<std::array<std::int64_t, 4>> integer_payoffs(const PayoffValues& p) {
  std::array<std::int64_t, 4> out{};
  const std::array<double, 4> in{p.T, p.R, p.P, p.S};
  for (std::size_t i = 0; i < 4; ++i) {
    if (in[i] != std::floor(in[i]) || std::fabs(in[i]) > 1e12) return std::nullopt;
    out[i] = static_cast<std::int64_t>(in[i]);
  }
  return out;
}

// numerator / denominator evaluated in double and, when possible, exactly.
template <typename F>
Bound make_bound(const PayoffValues& p, F&& fraction) {
  Bound b;
  const auto [num, den] = fraction(p.T, p.R, p.P, p.S);
  b.value = num / den;
  if (const auto ints = integer_payoffs(p)) {
    const auto [T, R, P, S] = *ints;
    const auto [inum, iden] = fraction(T, R, P, S);
    b.exact = Rational(inum, iden);
  }
  return b;
}

bool exceeds(std::int64_t n, const Bound& bound) {
  if (bound.exact) return Rational(n) > *bound.exact;
  return static_cast<double>(n) > bound.value;
}

}  // namespace

bool pair_covered(const Phenotype& a, const Phenotype& b) {
  return behavior_of(a).has_value() && behavior_of(b).has_value();
}

double pair_payoff(const Phenotype& a, const Phenotype& b, int n, const PayoffValues& p) {
  require_rounds(n);
  const auto ba = behavior_of(a);
  const auto bb = behavior_of(b);
  if (!ba || !bb) {
    throw AnalysisError("no closed form for " + to_string(a) + " vs " + to_string(b) +
                        "; use the match engine");
  }
  switch (*ba) {
    case Behavior::Tft:
      if (*bb == Behavior::Tft) return n * p.R;
      if (*bb == Behavior::Alld) return p.S + (n - 1) * p.P;
      return tft_vs_csmsm(n, p);
    case Behavior::Alld:
      if (*bb == Behavior::Alld) return n * p.P;
      return p.T + (n - 1) * p.P;
    case Behavior::Master:
    case Behavior::Slave:
      if (*bb == Behavior::Tft) return csmsm_vs_tft(n, p);
      if (*bb == Behavior::Alld) return (n - 1) * p.P + p.S;
      if (*ba == Behavior::Master) {
        return *bb == Behavior::Master ? master_vs_master(n, p) : master_vs_slave(n, p);
      }
      return *bb == Behavior::Master ? slave_vs_master(n, p) : slave_vs_slave(n, p);
  }
  return 0.0;
}

double tft_payoff(int csmsm_neighbors, int n, const PayoffValues& p) {
  require_rounds(n);
  require_range("CSMSM neighbour count", csmsm_neighbors, 0, 3);
  return (8 - csmsm_neighbors) * n * p.R + csmsm_neighbors * tft_vs_csmsm(n, p);
}

double alld_payoff(int csmsm_neighbors, int n, const PayoffValues& p) {
  require_rounds(n);
  require_range("CSMSM neighbour count", csmsm_neighbors, 0, 2);
  return (8 - csmsm_neighbors) * n * p.P + csmsm_neighbors * (p.T + (n - 1) * p.P);
}

double master_payoff(MasterPosition position, int slaves, int n, const PayoffValues& p) {
  require_rounds(n);
  int csmsm = 8;
  switch (position) {
    case MasterPosition::Center: csmsm = 8; break;
    case MasterPosition::Border: csmsm = 5; break;
    case MasterPosition::Corner: csmsm = 3; break;
  }
  require_range("slave count", slaves, 0, csmsm);
  return slaves * master_vs_slave(n, p) + (csmsm - slaves) * master_vs_master(n, p) +
         (8 - csmsm) * csmsm_vs_tft(n, p);
}

double pair_in_alld_payoff(const Phenotype& self, const Phenotype& partner, int n,
                           const PayoffValues& p) {
  if (self.kind != StrategyKind::CSMSM || partner.kind != StrategyKind::CSMSM) {
    throw AnalysisError("pair_in_alld_payoff expects two CSMSM phenotypes");
  }
  return 7 * pair_payoff(self, {StrategyKind::ALLD, std::nullopt}, n, p) +
         pair_payoff(self, partner, n, p);
}

std::string Bound::text() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  if (!exact) return buf;
  std::ostringstream out;
  if (exact->denominator() == 1) {
    out << exact->numerator();
  } else {
    out << exact->numerator() << '/' << exact->denominator();
    std::snprintf(buf, sizeof buf, "%.4g", value);
    out << " (" << buf << ")";
  }
  return out.str();
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Grow: return "grow";
    case Verdict::Hold: return "hold";
    case Verdict::Shrink: return "shrink";
  }
  return "?";
}

ThresholdReport thresholds(int n, const PayoffValues& p, const ScenarioCounts& counts) {
  require_rounds(n);
  validate_payoffs(p);

  // Gain of a master per neighbour switching from master to slave.
  const double slave_gain = n * (p.T - p.R) - 6 * p.T + 5 * p.R + p.S;
  if (slave_gain == 0.0) {
    throw AnalysisError(
        "border threshold undefined: denominator n(T-R) - 6T + 5R + S is zero for n = " +
        std::to_string(n));
  }

  ThresholdReport r;
  r.rounds = n;
  r.payoffs = p;
  const auto nn = static_cast<std::int64_t>(n);

  r.center_n_star = make_bound(p, [](auto T, auto R, auto P, auto S) {
    (void)T;
    return std::pair{17 * R - 18 * P + S, R - P};
  });
  r.border_grow_l_star = make_bound(p, [nn](auto T, auto R, auto P, auto S) {
    using V = decltype(T);
    const V n = static_cast<V>(nn);
    return std::pair{3 * n * (R - P) - 3 * T + 7 * R - 4 * P, n * (T - R) - 6 * T + 5 * R + S};
  });
  r.border_grow_l_limit = make_bound(p, [](auto T, auto R, auto P, auto) {
    return std::pair{3 * (R - P), T - R};
  });
  r.border_hold.upper = r.border_grow_l_star;
  r.border_hold.lower = make_bound(p, [nn](auto T, auto R, auto P, auto S) {
    using V = decltype(T);
    const V n = static_cast<V>(nn);
    return std::pair{2 * n * (R - P) - 3 * T + 8 * R - 6 * P + S, n * (T - R) - 6 * T + 5 * R + S};
  });
  r.border_hold_limit.upper = r.border_grow_l_limit;
  r.border_hold_limit.lower = make_bound(p, [](auto T, auto R, auto P, auto) {
    return std::pair{2 * (R - P), T - R};
  });
  // Master of a master/slave pair: 7((n-1)P + S) + (n-6)T + 3R + 2P + S
  // against the best ALLD, 8nP + 2T - 2P.
  r.alld_invasion_n_star = make_bound(p, [](auto T, auto R, auto P, auto S) {
    return std::pair{8 * T - 3 * R + 3 * P - 8 * S, T - P};
  });

  r.center_protected = exceeds(nn, r.center_n_star);
  r.alld_invaded = exceeds(nn, r.alld_invasion_n_star);

  const double t0 = tft_payoff(0, n, p);
  const double t1 = tft_payoff(1, n, p);
  const double t2 = tft_payoff(2, n, p);
  if (counts.center_slaves) {
    const double c0 = master_payoff(MasterPosition::Center, *counts.center_slaves, n, p);
    r.center_verdict = c0 > t0 ? Verdict::Grow : c0 > t1 ? Verdict::Hold : Verdict::Shrink;
  }
  if (counts.border_slaves) {
    const double c1 = master_payoff(MasterPosition::Border, *counts.border_slaves, n, p);
    r.border_verdict = c1 > t0 ? Verdict::Grow : c1 > t1 ? Verdict::Hold : Verdict::Shrink;
  }
  if (counts.corner_slaves) {
    const double c2 = master_payoff(MasterPosition::Corner, *counts.corner_slaves, n, p);
    r.corner_verdict = c2 > t0 ? Verdict::Grow : c2 > t2 ? Verdict::Hold : Verdict::Shrink;
  }
  return r;
}

namespace {

std::string fmt_payoffs(const PayoffValues& p) {
  std::ostringstream out;
  out << p.T << ',' << p.R << ',' << p.P << ',' << p.S;
  return out.str();
}

}  // namespace

std::string render_text(const ThresholdReport& r) {
  std::ostringstream out;
  out << "payoffs T,R,P,S = " << fmt_payoffs(r.payoffs) << ", rounds n = " << r.rounds << "\n\n";
  out << "TFT totals:  T0 = " << tft_payoff(0, r.rounds, r.payoffs)
      << "  T1 = " << tft_payoff(1, r.rounds, r.payoffs)
      << "  T2 = " << tft_payoff(2, r.rounds, r.payoffs)
      << "  T3 = " << tft_payoff(3, r.rounds, r.payoffs) << "\n";
  out << "ALLD totals: D0 = " << alld_payoff(0, r.rounds, r.payoffs)
      << "  D1 = " << alld_payoff(1, r.rounds, r.payoffs)
      << "  D2 = " << alld_payoff(2, r.rounds, r.payoffs) << "\n\n";
  out << "center master safe for every slave count:  n* = " << r.center_n_star.text()
      << (r.center_protected ? "  (n > n*: protected)" : "  (n <= n*: not guaranteed)") << "\n";
  out << "border master grows the cluster:           l* = " << r.border_grow_l_star.text() << "\n";
  out << "  large-n limit:                           l* = " << r.border_grow_l_limit.text()
      << "\n";
  out << "border master holds the cluster:           " << r.border_hold.lower.text()
      << " < l < " << r.border_hold.upper.text() << "\n";
  out << "  large-n limit:                           " << r.border_hold_limit.lower.text()
      << " < l < " << r.border_hold_limit.upper.text() << "\n";
  out << "master/slave pair invades ALLD:            n* = " << r.alld_invasion_n_star.text()
      << (r.alld_invaded ? "  (n > n*: invades)" : "  (n <= n*: no invasion)") << "\n";
  if (r.center_verdict) out << "center verdict: " << to_string(*r.center_verdict) << "\n";
  if (r.border_verdict) out << "border verdict: " << to_string(*r.border_verdict) << "\n";
  if (r.corner_verdict) out << "corner verdict: " << to_string(*r.corner_verdict) << "\n";
  return out.str();
}

std::string render_csv(const ThresholdReport& r) {
  std::ostringstream out;
  auto row = [&](const std::string& key, const std::string& value) {
    out << key << ',' << value << '\n';
  };
  auto bound = [&](const std::string& key, const Bound& b) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", b.value);
    row(key, buf);
    if (b.exact) {
      std::ostringstream ex;
      ex << b.exact->numerator() << '/' << b.exact->denominator();
      row(key + "_exact", ex.str());
    }
  };
  out << "key,value\n";
  row("rounds", std::to_string(r.rounds));
  row("payoffs", '"' + fmt_payoffs(r.payoffs) + '"');
  bound("center_n_star", r.center_n_star);
  bound("border_grow_l_star", r.border_grow_l_star);
  bound("border_grow_l_limit", r.border_grow_l_limit);
  bound("border_hold_lower", r.border_hold.lower);
  bound("border_hold_upper", r.border_hold.upper);
  bound("border_hold_limit_lower", r.border_hold_limit.lower);
  bound("border_hold_limit_upper", r.border_hold_limit.upper);
  bound("alld_invasion_n_star", r.alld_invasion_n_star);
  row("center_protected", r.center_protected ? "true" : "false");
  row("alld_invaded", r.alld_invaded ? "true" : "false");
  if (r.center_verdict) row("center_verdict", std::string(to_string(*r.center_verdict)));
  if (r.border_verdict) row("border_verdict", std::string(to_string(*r.border_verdict)));
  if (r.corner_verdict) row("corner_verdict", std::string(to_string(*r.corner_verdict)));
  return out.str();
}

}  // namespace sipd::analysis
