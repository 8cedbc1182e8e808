#include "sipd/scenario.hpp"

#include <sstream>

namespace sipd {

ScenarioError::ScenarioError(int line, const std::string& message)
    : std::invalid_argument(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

namespace {

int parse_int(std::istringstream& fields, int line, const char* what) {
  std::string token;
  if (!(fields >> token)) throw ScenarioError(line, std::string("missing ") + what);
  try {
    std::size_t used = 0;
    const int v = std::stoi(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw ScenarioError(line, std::string("bad ") + what + " '" + token + "'");
  }
}

std::string parse_word(std::istringstream& fields, int line, const char* what) {
  std::string token;
  if (!(fields >> token)) throw ScenarioError(line, std::string("missing ") + what);
  return token;
}

void expect_end(std::istringstream& fields, int line) {
  std::string extra;
  if (fields >> extra) throw ScenarioError(line, "unexpected '" + extra + "'");
}

}  // namespace

ScenarioDescriptor parse_scenario(std::istream& in) {
  ScenarioDescriptor desc;
  bool have_grid = false;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream fields(raw);
    std::string directive;
    if (!(fields >> directive)) continue;

    if (directive == "grid") {
      desc.width = parse_int(fields, line, "width");
      desc.height = parse_int(fields, line, "height");
      if (desc.width < 3 || desc.height < 3) throw ScenarioError(line, "grid must be at least 3x3");
      have_grid = true;
    } else if (directive == "background") {
      const std::string token = parse_word(fields, line, "strategy");
      const auto kind = parse_kind(token);
      if (!kind) {
        throw ScenarioError(line, "unknown strategy '" + token + "' (valid: " +
                                      valid_kind_tokens() + ")");
      }
      desc.background = *kind;
    } else if (directive == "cluster") {
      ScenarioDescriptor::Cluster c;
      c.x = parse_int(fields, line, "x");
      c.y = parse_int(fields, line, "y");
      c.width = parse_int(fields, line, "width");
      c.height = parse_int(fields, line, "height");
      if (c.width < 0 || c.height < 0) throw ScenarioError(line, "negative cluster size");
      c.line = line;
      desc.clusters.push_back(c);
    } else if (directive == "role") {
      ScenarioDescriptor::RoleAssignment r;
      r.x = parse_int(fields, line, "x");
      r.y = parse_int(fields, line, "y");
      const std::string token = parse_word(fields, line, "role");
      const auto role = parse_role(token);
      if (!role) throw ScenarioError(line, "role must be MASTER or SLAVE, got '" + token + "'");
      r.role = *role;
      r.line = line;
      desc.roles.push_back(r);
    } else if (directive == "freeze_roles") {
      const std::string token = parse_word(fields, line, "on|off");
      if (token == "on") {
        desc.freeze_roles = true;
      } else if (token == "off") {
        desc.freeze_roles = false;
      } else {
        throw ScenarioError(line, "freeze_roles expects on or off, got '" + token + "'");
      }
    } else {
      throw ScenarioError(line, "unknown directive '" + directive + "'");
    }
    expect_end(fields, line);
  }
  if (!have_grid) throw ScenarioError(0, "descriptor has no grid directive");
  return desc;
}

ScenarioDescriptor parse_scenario_text(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in);
}

GridState init_scenario(const ScenarioDescriptor& desc) {
  const Phenotype background =
      desc.background == StrategyKind::CSMSM ? kMaster : Phenotype{desc.background, std::nullopt};
  GridState g = make_grid(desc.width, desc.height, background);
  for (const auto& c : desc.clusters) {
    if (c.x < 0 || c.y < 0 || c.x + c.width > desc.width || c.y + c.height > desc.height) {
      throw ScenarioError(c.line, "cluster outside the " + std::to_string(desc.width) + "x" +
                                      std::to_string(desc.height) + " grid");
    }
    for (int y = c.y; y < c.y + c.height; ++y) {
      for (int x = c.x; x < c.x + c.width; ++x) g.at(x, y).set_phenotype(kMaster);
    }
  }
  for (const auto& r : desc.roles) {
    if (r.x < 0 || r.y < 0 || r.x >= desc.width || r.y >= desc.height) {
      throw ScenarioError(r.line, "role cell outside the grid");
    }
    CellState& cell = g.at(r.x, r.y);
    if (cell.kind != StrategyKind::CSMSM) throw ScenarioError(r.line, "role set on a non-CSMSM cell");
    cell.role = r.role;
  }
  return g;
}

}  // namespace sipd
