#pragma once

#include <memory>
#include <string>
#include <vector>

#include "goalassign/agents.hpp"

namespace goalassign {

enum class Mode { kRankOnce, kRankEveryStep };

std::string to_string(Mode mode);

struct TraceStep {
  int step = 0;
  std::vector<Position> positions;
  std::vector<GoalIndex> assignment;  // goal_of used for the move into this state

  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

struct FallbackEvent {
  int step = 0;
  AgentIndex agent = 0;

  friend bool operator==(const FallbackEvent&, const FallbackEvent&) = default;
};

struct EpisodeResult {
  Assignment assignment;         // final assignment, costed from starting cells
  std::vector<int> arrival_times;
  int makespan = 0;              // simulated (every-step) or analytic (rank-once)
  int analytic_makespan = 0;     // max start->goal distance of the final assignment
  Mode mode = Mode::kRankOnce;
  std::string strategy;
  bool timed_out = false;
  int steps = 0;                 // timesteps simulated
  int retries = 0;
  std::vector<FallbackEvent> fallbacks;
  std::vector<TraceStep> trace;  // empty in rank-once mode

  friend bool operator==(const EpisodeResult&, const EpisodeResult&) = default;
};

using Agents = std::vector<std::unique_ptr<DecisionMaker>>;

struct EpisodeOptions {
  bool include_distances = true;
  std::string strategy = "";
};

// Two announcement rounds, one resolve, no movement. Arrival times are the
// start-to-goal BFS distances of the resolved assignment.
EpisodeResult run_rank_once(const Scenario& scenario, Agents& agents, const EpisodeOptions& options = {});

// Re-rank, resolve and advance one step per timestep until every agent stands
// on its assigned goal or step_limit steps have been taken.
EpisodeResult run_rank_every_step(const Scenario& scenario, Agents& agents, int step_limit,
                                  const EpisodeOptions& options = {});

inline int default_step_limit(const Scenario& scenario) { return 4 * scenario.n * scenario.n; }

// Throws TimedOutEpisode.
int makespan_of(const EpisodeResult& result);

// Pinned agents' goals are pushed behind every free goal (stable order), so
// serial dictatorship leaves them with their holders.
Ranking demote_goals(Ranking ranking, const std::vector<GoalIndex>& pinned_goals);

// Checks the motion rules over a whole trace: in bounds, off obstacles, no two
// agents on one cell, and each agent moves at most one orthogonal step.
// Returns an empty string when legal, otherwise a description of the first fault.
std::string check_trace(const Scenario& scenario, const std::vector<TraceStep>& trace);

}  // namespace goalassign
