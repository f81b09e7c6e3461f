#include "goalassign/assignment.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "goalassign/random.hpp"

namespace goalassign {

bool is_complete(const Ranking& ranking, int k) {
  if (static_cast<int>(ranking.order.size()) != k) return false;
  std::vector<char> seen(static_cast<size_t>(k), 0);
  for (GoalIndex g : ranking.order) {
    if (g < 0 || g >= k || seen[g]) return false;
    seen[g] = 1;
  }
  return true;
}

bool Assignment::is_bijection() const {
  return is_complete(Ranking{0, goal_of}, size());
}

std::string describe(const Assignment& assignment) {
  std::string out;
  for (int i = 0; i < assignment.size(); ++i) {
    if (i) out += ' ';
    out += "a" + std::to_string(i + 1) + "→" + goal_label(assignment.goal_of[i]);
  }
  return out;
}

Assignment evaluate(const DistanceMatrix& matrix, std::vector<GoalIndex> goal_of) {
  Assignment a{std::move(goal_of), 0, 0};
  for (int i = 0; i < a.size(); ++i) {
    Distance d = matrix(i, a.goal_of[i]);
    if (!d.finite())
      throw Infeasible("agent " + std::to_string(i + 1) + " cannot reach goal " + goal_label(a.goal_of[i]));
    a.makespan = std::max(a.makespan, d.value());
    a.total_distance += d.value();
  }
  return a;
}

std::vector<GoalIndex> resolve_pairs(const std::vector<Ranking>& rankings) {
  const int k = static_cast<int>(rankings.size());
  std::vector<const Ranking*> by_agent(static_cast<size_t>(k), nullptr);
  for (const Ranking& r : rankings) {
    if (r.agent < 0 || r.agent >= k || by_agent[r.agent])
      throw IncompleteRanking("expected exactly one ranking per agent");
    if (!is_complete(r, k)) throw IncompleteRanking("ranking of agent " + std::to_string(r.agent + 1) + " is incomplete");
    by_agent[r.agent] = &r;
  }

  std::vector<char> taken(static_cast<size_t>(k), 0);
  std::vector<GoalIndex> goal_of(static_cast<size_t>(k), -1);
  for (int i = 0; i < k; ++i) {
    for (GoalIndex g : by_agent[i]->order) {
      if (!taken[g]) {
        taken[g] = 1;
        goal_of[i] = g;
        break;
      }
    }
  }
  return goal_of;
}

Assignment resolve(const std::vector<Ranking>& rankings, const DistanceMatrix& matrix) {
  return evaluate(matrix, resolve_pairs(rankings));
}

std::vector<GoalIndex> distance_order(const DistanceMatrix& matrix, AgentIndex agent) {
  std::vector<GoalIndex> order(static_cast<size_t>(matrix.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](GoalIndex a, GoalIndex b) { return matrix(agent, a) < matrix(agent, b); });
  return order;
}

Assignment greedy(const DistanceMatrix& matrix) {
  std::vector<Ranking> rankings;
  for (int i = 0; i < matrix.size(); ++i) rankings.push_back({i, distance_order(matrix, i)});
  return resolve(rankings, matrix);
}

Assignment random_assign(const DistanceMatrix& matrix, std::uint64_t seed) {
  std::vector<GoalIndex> goal_of(static_cast<size_t>(matrix.size()));
  std::iota(goal_of.begin(), goal_of.end(), 0);
  std::mt19937_64 rng(seed);
  for (int i = matrix.size() - 1; i > 0; --i) std::swap(goal_of[i], goal_of[uniform_int(rng, 0, i)]);
  return evaluate(matrix, std::move(goal_of));
}

bool has_perfect_matching(const DistanceMatrix& matrix) {
  const int k = matrix.size();
  std::vector<int> agent_of(static_cast<size_t>(k), -1);
  std::vector<char> visited;
  // Kuhn's augmenting paths.
  auto augment = [&](auto&& self, int agent) -> bool {
    for (int g = 0; g < k; ++g) {
      if (!matrix(agent, g).finite() || visited[g]) continue;
      visited[g] = 1;
      if (agent_of[g] < 0 || self(self, agent_of[g])) {
        agent_of[g] = agent;
        return true;
      }
    }
    return false;
  };
  for (int i = 0; i < k; ++i) {
    visited.assign(static_cast<size_t>(k), 0);
    if (!augment(augment, i)) return false;
  }
  return true;
}

Assignment optimal(const DistanceMatrix& matrix) {
  const int k = matrix.size();
  if (k > kMaxOptimalAgents)
    throw KTooLarge("optimal: k=" + std::to_string(k) + " exceeds " + std::to_string(kMaxOptimalAgents));
  if (!has_perfect_matching(matrix)) throw Infeasible("optimal: no assignment with all goals reachable");

  std::vector<GoalIndex> perm(static_cast<size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<GoalIndex> best;
  int best_makespan = 0;
  int best_total = 0;
  // Lexicographic enumeration: the first permutation reaching the best
  // (makespan, total) pair is the lexicographically smallest one.
  do {
    int makespan = 0;
    int total = 0;
    bool feasible = true;
    for (int i = 0; i < k; ++i) {
      Distance d = matrix(i, perm[i]);
      if (!d.finite()) {
        feasible = false;
        break;
      }
      makespan = std::max(makespan, d.value());
      total += d.value();
    }
    if (!feasible) continue;
    if (best.empty() || makespan < best_makespan || (makespan == best_makespan && total < best_total)) {
      best = perm;
      best_makespan = makespan;
      best_total = total;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {std::move(best), best_makespan, best_total};
}

int gap(const Assignment& assignment, const Assignment& optimum) { return assignment.makespan - optimum.makespan; }

}  // namespace goalassign
