#pragma once

#include <map>
#include <optional>
#include <vector>

#include "goalassign/assignment.hpp"

namespace goalassign {

// What one agent sees before it ranks goals. Built by the episode driver and
// handed to decision makers as an immutable value.
struct Observation {
  const Scenario* scenario = nullptr;
  std::vector<Position> positions;        // current cell of every agent
  AgentIndex self = 0;
  std::vector<GoalIndex> remaining_goals;  // goals not held by an arrived agent
  std::vector<AgentIndex> active_agents;   // agents that still have to move
  std::optional<DistanceMatrix> distances;  // from current positions
  std::map<AgentIndex, Ranking> others_provisional;
  int round = 0;
  int step = 0;

  int k() const { return scenario->k; }
  // The attached table, or one computed on demand from current positions.
  DistanceMatrix distances_or_compute() const;
};

}  // namespace goalassign
