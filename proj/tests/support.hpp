// Shared fixtures and independent oracles for the test suites. Nothing here
// calls into the code paths it is used to check.
#pragma once

#include <algorithm>
#include <climits>
#include <filesystem>
#include <functional>
#include <vector>

#include "goalassign/world.hpp"

namespace goalassign::testing {

inline std::filesystem::path fixture(const char* name) {
  return std::filesystem::path(GOALASSIGN_FIXTURE_DIR) / name;
}

// 5x5 grid whose rows 1..4 are walls, leaving a one-row corridor:
// row 0 reads "2.1AB".
inline Scenario corridor() {
  Scenario s;
  s.n = 5;
  s.k = 2;
  s.agents = {{0, 2}, {0, 0}};
  s.goals = {{0, 3}, {0, 4}};
  for (int r = 1; r < 5; ++r)
    for (int c = 0; c < 5; ++c) s.obstacles.push_back({r, c});
  s.seed = 11;
  return s;
}

// Small world with 3 agents, 3 goals, 2 obstacles where greedy is optimal:
// 1->B, 2->A, 3->C, makespan 3 set by agent 2.
inline Scenario small_world() {
  Scenario s;
  s.n = 5;
  s.k = 3;
  s.agents = {{0, 0}, {4, 0}, {0, 4}};
  s.goals = {{2, 1}, {1, 1}, {1, 4}};
  s.obstacles = {{2, 3}, {3, 3}};
  s.seed = 1;
  return s;
}

inline Scenario empty_grid(int n, std::vector<Position> agents, std::vector<Position> goals,
                           std::vector<Position> obstacles = {}) {
  Scenario s;
  s.n = n;
  s.k = static_cast<int>(agents.size());
  s.agents = std::move(agents);
  s.goals = std::move(goals);
  s.obstacles = std::move(obstacles);
  std::sort(s.obstacles.begin(), s.obstacles.end());
  return s;
}

inline constexpr int kInf = INT_MAX / 4;

// Floyd-Warshall over free cells; dist[a][b] indexed by row*n+col.
inline std::vector<std::vector<int>> floyd_warshall(const Scenario& s) {
  const int cells = s.n * s.n;
  std::vector<std::vector<int>> d(cells, std::vector<int>(cells, kInf));
  auto free = [&](int r, int c) { return r >= 0 && c >= 0 && r < s.n && c < s.n && !s.is_obstacle({r, c}); };
  for (int r = 0; r < s.n; ++r)
    for (int c = 0; c < s.n; ++c) {
      if (!free(r, c)) continue;
      const int a = r * s.n + c;
      d[a][a] = 0;
      const int dr[] = {1, -1, 0, 0}, dc[] = {0, 0, 1, -1};
      for (int m = 0; m < 4; ++m)
        if (free(r + dr[m], c + dc[m])) d[a][(r + dr[m]) * s.n + c + dc[m]] = 1;
    }
  for (int via = 0; via < cells; ++via)
    for (int a = 0; a < cells; ++a)
      for (int b = 0; b < cells; ++b)
        if (d[a][via] + d[via][b] < d[a][b]) d[a][b] = d[a][via] + d[via][b];
  return d;
}

struct BruteForce {
  std::vector<int> goal_of;
  int makespan = kInf;
  int total = kInf;
};

// Recursive enumeration of all bijections over a plain int table (kInf for
// unreachable). Visits goals in ascending order per agent, so the first
// assignment reaching the best (makespan, total) is lexicographically smallest.
inline BruteForce enumerate_assignments(const std::vector<std::vector<int>>& cost) {
  const int k = static_cast<int>(cost.size());
  BruteForce best;
  std::vector<int> current(k, -1);
  std::vector<bool> used(k, false);
  std::function<void(int, int, int)> go = [&](int agent, int worst, int total) {
    if (agent == k) {
      if (worst < best.makespan || (worst == best.makespan && total < best.total)) best = {current, worst, total};
      return;
    }
    for (int g = 0; g < k; ++g) {
      if (used[g] || cost[agent][g] >= kInf) continue;
      used[g] = true;
      current[agent] = g;
      go(agent + 1, std::max(worst, cost[agent][g]), total + cost[agent][g]);
      used[g] = false;
    }
  };
  go(0, 0, 0);
  return best;
}

// Agents in index order take their nearest free goal (ties by label).
inline std::vector<int> sequential_nearest(const std::vector<std::vector<int>>& cost) {
  const int k = static_cast<int>(cost.size());
  std::vector<bool> taken(k, false);
  std::vector<int> out(k, -1);
  for (int i = 0; i < k; ++i) {
    int pick = -1;
    for (int g = 0; g < k; ++g)
      if (!taken[g] && (pick < 0 || cost[i][g] < cost[i][pick])) pick = g;
    taken[pick] = true;
    out[i] = pick;
  }
  return out;
}

// Agent-to-goal table from the Floyd-Warshall oracle.
inline std::vector<std::vector<int>> oracle_costs(const Scenario& s, const std::vector<Position>& from) {
  auto d = floyd_warshall(s);
  std::vector<std::vector<int>> cost(s.k, std::vector<int>(s.k));
  for (int i = 0; i < s.k; ++i)
    for (int j = 0; j < s.k; ++j) cost[i][j] = d[s.cell_index(from[i])][s.cell_index(s.goals[j])];
  return cost;
}

}  // namespace goalassign::testing
