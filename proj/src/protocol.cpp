#include "goalassign/protocol.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace goalassign {

std::string to_string(Mode mode) { return mode == Mode::kRankOnce ? "rank_once" : "rank_every_step"; }

int makespan_of(const EpisodeResult& result) {
  if (result.timed_out) throw TimedOutEpisode("episode hit its step limit before every agent arrived");
  return result.arrival_times.empty() ? 0 : *std::max_element(result.arrival_times.begin(), result.arrival_times.end());
}

Ranking demote_goals(Ranking ranking, const std::vector<GoalIndex>& pinned_goals) {
  std::stable_partition(ranking.order.begin(), ranking.order.end(), [&](GoalIndex g) {
    return std::find(pinned_goals.begin(), pinned_goals.end(), g) == pinned_goals.end();
  });
  return ranking;
}

namespace {

void check_agents(const Scenario& scenario, const Agents& agents) {
  if (static_cast<int>(agents.size()) != scenario.k)
    throw ConfigError("expected " + std::to_string(scenario.k) + " decision makers, got " +
                      std::to_string(agents.size()));
  for (const auto& a : agents)
    if (!a) throw ConfigError("null decision maker");
}

// Asks one agent for a ranking and enforces the ranking contract.
Ranking ask(DecisionMaker& agent, const Observation& obs, EpisodeResult& result) {
  Decision d = agent.decide(obs);
  if (d.ranking.agent != obs.self || !is_complete(d.ranking, obs.k()))
    throw AgentFailure("agent " + std::to_string(obs.self + 1) + " (" + agent.name() + ") returned an invalid ranking");
  result.retries += d.retries;
  if (d.fallback) result.fallbacks.push_back({obs.step, obs.self});
  return std::move(d.ranking);
}

std::map<AgentIndex, Ranking> others(const std::vector<Ranking>& rankings, AgentIndex self) {
  std::map<AgentIndex, Ranking> out;
  for (const auto& r : rankings)
    if (r.agent != self) out.emplace(r.agent, r);
  return out;
}

std::vector<int> iota_vector(int k) {
  std::vector<int> v(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) v[i] = i;
  return v;
}

}  // namespace

EpisodeResult run_rank_once(const Scenario& scenario, Agents& agents, const EpisodeOptions& options) {
  check_agents(scenario, agents);
  const int k = scenario.k;
  const DistanceMatrix matrix = distance_matrix(scenario);

  EpisodeResult result;
  result.mode = Mode::kRankOnce;
  result.strategy = options.strategy;

  Observation base;
  base.scenario = &scenario;
  base.positions = scenario.agents;
  base.remaining_goals = iota_vector(k);
  base.active_agents = iota_vector(k);
  if (options.include_distances) base.distances = matrix;

  std::vector<Ranking> provisional;
  for (int i = 0; i < k; ++i) {
    Observation obs = base;
    obs.self = i;
    provisional.push_back(ask(*agents[i], obs, result));
  }

  std::vector<Ranking> final_rankings;
  for (int i = 0; i < k; ++i) {
    Observation obs = base;
    obs.self = i;
    obs.round = 1;
    obs.others_provisional = others(provisional, i);
    final_rankings.push_back(ask(*agents[i], obs, result));
  }

  result.assignment = resolve(final_rankings, matrix);
  for (int i = 0; i < k; ++i) result.arrival_times.push_back(matrix(i, result.assignment.goal_of[i]).value());
  result.makespan = result.assignment.makespan;
  result.analytic_makespan = result.assignment.makespan;
  return result;
}

namespace {

// Next cell for each agent after movement conflicts are settled. Stationary
// agents keep their cell; among movers contesting a cell the lowest index
// wins. Losers wait, which may in turn block others, so iterate to a fixpoint.
std::vector<Position> settle_moves(const std::vector<Position>& current, std::vector<Position> target) {
  const int k = static_cast<int>(current.size());
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<Position, std::vector<int>> claims;
    for (int i = 0; i < k; ++i) claims[target[i]].push_back(i);
    for (auto& [cell, who] : claims) {
      if (who.size() < 2) continue;
      int winner = who.front();  // lowest index, since agents were scanned in order
      for (int i : who)
        if (current[i] == cell) winner = i;
      for (int i : who) {
        if (i != winner && target[i] != current[i]) {
          target[i] = current[i];
          changed = true;
        }
      }
    }
  }
  return target;
}

}  // namespace

EpisodeResult run_rank_every_step(const Scenario& scenario, Agents& agents, int step_limit,
                                  const EpisodeOptions& options) {
  check_agents(scenario, agents);
  if (step_limit < 1) throw ConfigError("step_limit must be at least 1");
  const int k = scenario.k;

  EpisodeResult result;
  result.mode = Mode::kRankEveryStep;
  result.strategy = options.strategy;
  result.arrival_times.assign(static_cast<size_t>(k), -1);

  std::vector<Position> positions = scenario.agents;
  std::vector<char> arrived(static_cast<size_t>(k), 0);
  std::vector<GoalIndex> goal_of(static_cast<size_t>(k), -1);
  std::vector<Ranking> previous;
  int step = 0;

  while (true) {
    std::vector<GoalIndex> pinned;
    std::vector<AgentIndex> active;
    std::vector<Position> pinned_cells;
    for (int i = 0; i < k; ++i) {
      if (arrived[i]) {
        pinned.push_back(goal_of[i]);
        pinned_cells.push_back(positions[i]);
      } else {
        active.push_back(i);
      }
    }
    std::vector<GoalIndex> remaining;
    for (int j = 0; j < k; ++j)
      if (std::find(pinned.begin(), pinned.end(), j) == pinned.end()) remaining.push_back(j);

    const DistanceMatrix current = distance_matrix(scenario, positions);
    std::vector<Ranking> rankings;
    for (int i = 0; i < k; ++i) {
      if (arrived[i]) {
        Ranking fixed{i, {goal_of[i]}};
        for (int j = 0; j < k; ++j)
          if (j != goal_of[i]) fixed.order.push_back(j);
        rankings.push_back(std::move(fixed));
        continue;
      }
      Observation obs;
      obs.scenario = &scenario;
      obs.positions = positions;
      obs.self = i;
      obs.remaining_goals = remaining;
      obs.active_agents = active;
      if (options.include_distances) obs.distances = current;
      if (!previous.empty()) obs.others_provisional = others(previous, i);
      obs.round = step;
      obs.step = step;
      rankings.push_back(demote_goals(ask(*agents[i], obs, result), pinned));
    }
    goal_of = resolve_pairs(rankings);
    previous = rankings;
    result.trace.push_back({step, positions, goal_of});

    for (int i : active) {
      if (positions[i] == scenario.goals[goal_of[i]]) {
        arrived[i] = 1;
        result.arrival_times[i] = step;
      }
    }
    if (std::all_of(arrived.begin(), arrived.end(), [](char a) { return a != 0; })) break;
    if (step >= step_limit) {
      result.timed_out = true;
      break;
    }

    std::vector<Position> target = positions;
    for (int i = 0; i < k; ++i) {
      if (arrived[i]) continue;
      const Position goal = scenario.goals[goal_of[i]];
      try {
        target[i] = shortest_path(scenario, positions[i], goal, pinned_cells).cells.at(1);
      } catch (const NoPath&) {
        // Pinned agents cut every route; head for the goal anyway and wait.
        try {
          target[i] = shortest_path(scenario, positions[i], goal).cells.at(1);
        } catch (const NoPath&) {
        }
      }
    }
    positions = settle_moves(positions, std::move(target));
    ++step;
  }

  result.steps = step;
  result.assignment = evaluate(distance_matrix(scenario), goal_of);
  result.analytic_makespan = result.assignment.makespan;
  result.makespan = result.timed_out ? step_limit : makespan_of(result);
  return result;
}

std::string check_trace(const Scenario& scenario, const std::vector<TraceStep>& trace) {
  for (std::size_t t = 0; t < trace.size(); ++t) {
    const auto& ps = trace[t].positions;
    std::set<Position> occupied;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const std::string where = "step " + std::to_string(t) + ", agent " + std::to_string(i + 1);
      if (!scenario.in_bounds(ps[i])) return where + " is off the grid";
      if (scenario.is_obstacle(ps[i])) return where + " is on an obstacle";
      if (!occupied.insert(ps[i]).second) return where + " shares a cell";
      if (t > 0) {
        const Position prev = trace[t - 1].positions[i];
        if (std::abs(prev.row - ps[i].row) + std::abs(prev.col - ps[i].col) > 1) return where + " jumped";
      }
    }
  }
  return {};
}

}  // namespace goalassign
