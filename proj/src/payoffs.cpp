#include "sipd/payoffs.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace sipd {

PayoffValues validate_payoffs(const PayoffValues& p) {
  for (double v : {p.T, p.R, p.P, p.S}) {
    if (!std::isfinite(v)) throw PayoffError("payoffs must be finite");
  }
  if (!(p.T > p.R)) throw PayoffError("payoff ordering violated: T > R");
  if (!(p.R > p.P)) throw PayoffError("payoff ordering violated: R > P");
  if (!(p.P > p.S)) throw PayoffError("payoff ordering violated: P > S");
  if (!(2.0 * p.R > p.S + p.T)) throw PayoffError("payoff ordering violated: R > (S + T)/2");
  return p;
}

PayoffValues parse_payoffs(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw PayoffError("bad payoff value '" + item + "'");
    }
    if (used != item.size()) throw PayoffError("bad payoff value '" + item + "'");
    values.push_back(v);
  }
  if (values.size() != 4) throw PayoffError("expected four payoffs T,R,P,S");
  return validate_payoffs({values[0], values[1], values[2], values[3]});
}

}  // namespace sipd
