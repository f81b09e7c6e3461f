#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "goalassign/pathing.hpp"

namespace goalassign {

// One agent's strict preference order over every goal.
struct Ranking {
  AgentIndex agent = 0;
  std::vector<GoalIndex> order;

  friend bool operator==(const Ranking&, const Ranking&) = default;
};

// True when order is a permutation of 0..k-1.
bool is_complete(const Ranking& ranking, int k);

struct Assignment {
  std::vector<GoalIndex> goal_of;  // goal_of[i] is agent i's goal
  int makespan = 0;
  int total_distance = 0;

  int size() const { return static_cast<int>(goal_of.size()); }
  bool is_bijection() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

// "a1→B a2→A"
std::string describe(const Assignment& assignment);

// Computes makespan and total distance of goal_of against the table.
// Throws Infeasible when any chosen pair is unreachable.
Assignment evaluate(const DistanceMatrix& matrix, std::vector<GoalIndex> goal_of);

// Serial dictatorship: agents in ascending index each take their best goal
// still free. The result carries no costs; see evaluate().
std::vector<GoalIndex> resolve_pairs(const std::vector<Ranking>& rankings);
Assignment resolve(const std::vector<Ranking>& rankings, const DistanceMatrix& matrix);

// Goals by ascending distance, ties by label.
std::vector<GoalIndex> distance_order(const DistanceMatrix& matrix, AgentIndex agent);

Assignment greedy(const DistanceMatrix& matrix);
Assignment random_assign(const DistanceMatrix& matrix, std::uint64_t seed);

inline constexpr int kMaxOptimalAgents = 10;

// Exhaustive min-max search. Ties: smaller total distance, then the
// lexicographically smallest goal sequence.
Assignment optimal(const DistanceMatrix& matrix);

// True when a perfect matching over finite entries exists.
bool has_perfect_matching(const DistanceMatrix& matrix);

int gap(const Assignment& assignment, const Assignment& optimum);

}  // namespace goalassign
