#pragma once

#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sipd/grid.hpp"

namespace sipd {

// Error tied to a descriptor line (0 when not line-specific).
class ScenarioError : public std::invalid_argument {
 public:
  ScenarioError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

// Text descriptor, one directive per line ('#' starts a comment):
//   grid W H
//   background KIND
//   cluster X Y W H          block of CSMSM masters, top-left at (X, Y)
//   role X Y MASTER|SLAVE    role of a CSMSM cell placed by a cluster
//   freeze_roles on|off
struct ScenarioDescriptor {
  struct Cluster {
    int x = 0, y = 0, width = 0, height = 0;
    int line = 0;
  };
  struct RoleAssignment {
    int x = 0, y = 0;
    Role role = Role::Master;
    int line = 0;
  };

  int width = 0;
  int height = 0;
  StrategyKind background = StrategyKind::TFT;
  std::vector<Cluster> clusters;
  std::vector<RoleAssignment> roles;
  bool freeze_roles = false;
};

ScenarioDescriptor parse_scenario(std::istream& in);
ScenarioDescriptor parse_scenario_text(const std::string& text);

// Builds the described grid at generation 0. Throws ScenarioError when a
// cluster or role falls outside the grid or a role targets a non-CSMSM cell.
GridState init_scenario(const ScenarioDescriptor& desc);

}  // namespace sipd
