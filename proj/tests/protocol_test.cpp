#include <gtest/gtest.h>

#include "goalassign/protocol.hpp"
#include "support.hpp"

using namespace goalassign;
namespace gt = goalassign::testing;

namespace {

template <typename T>
Agents team(int k) {
  Agents out;
  for (int i = 0; i < k; ++i) out.push_back(std::make_unique<T>());
  return out;
}

Agents scripted(std::vector<std::vector<GoalIndex>> orders) {
  Agents out;
  for (auto& o : orders) out.push_back(std::make_unique<ScriptedAgent>(std::vector<std::vector<GoalIndex>>{o}));
  return out;
}

// Records every observation it is handed.
class Spy final : public DecisionMaker {
 public:
  Decision decide(const Observation& o) override {
    seen.push_back(o);
    return {distance_ranker(o)};
  }
  bool deterministic() const override { return true; }
  std::string name() const override { return "spy"; }
  std::vector<Observation> seen;
};

}  // namespace

TEST(RankOnce, DistanceAgentsReproduceGreedy) {
  const Scenario s = gt::corridor();
  auto agents = team<DistanceRanker>(2);
  const auto r = run_rank_once(s, agents);
  EXPECT_EQ(r.assignment, greedy(distance_matrix(s)));
  EXPECT_EQ(r.makespan, 4);
  EXPECT_EQ(r.arrival_times, (std::vector<int>{1, 4}));
  EXPECT_TRUE(r.trace.empty());
}

TEST(RankOnce, OracleAgentsReproduceOptimal) {
  const Scenario s = gt::corridor();
  auto agents = team<TeamOracle>(2);
  const auto r = run_rank_once(s, agents);
  EXPECT_EQ(r.assignment, optimal(distance_matrix(s)));
  EXPECT_EQ(r.makespan, 3);
}

TEST(RankOnce, SingleAgent) {
  const Scenario s = gt::empty_grid(3, {{0, 0}}, {{2, 2}});
  auto agents = team<DistanceRanker>(1);
  EXPECT_EQ(run_rank_once(s, agents).makespan, 4);
}

TEST(RankOnce, SecondRoundSeesProvisionalRankings) {
  const Scenario s = gt::small_world();
  Agents agents;
  std::vector<Spy*> spies;
  for (int i = 0; i < 3; ++i) {
    auto spy = std::make_unique<Spy>();
    spies.push_back(spy.get());
    agents.push_back(std::move(spy));
  }
  run_rank_once(s, agents);
  for (int i = 0; i < 3; ++i) {
    ASSERT_EQ(spies[i]->seen.size(), 2u);
    EXPECT_TRUE(spies[i]->seen[0].others_provisional.empty());
    EXPECT_EQ(spies[i]->seen[1].others_provisional.size(), 2u);
    EXPECT_EQ(spies[i]->seen[1].others_provisional.count(i), 0u);
    EXPECT_TRUE(spies[i]->seen[0].distances.has_value());
  }
}

TEST(RankOnce, DistancesCanBeWithheld) {
  const Scenario s = gt::corridor();
  Agents agents;
  auto spy = std::make_unique<Spy>();
  Spy* raw = spy.get();
  agents.push_back(std::move(spy));
  agents.push_back(std::make_unique<DistanceRanker>());
  run_rank_once(s, agents, {.include_distances = false});
  EXPECT_FALSE(raw->seen[0].distances.has_value());
}

TEST(RankOnce, InvalidRankingIsAgentFailure) {
  const Scenario s = gt::corridor();
  auto agents = scripted({{0}, {0, 1}});
  EXPECT_THROW(run_rank_once(s, agents), AgentFailure);
  auto wrong_count = team<DistanceRanker>(1);
  EXPECT_THROW(run_rank_once(s, wrong_count), ConfigError);
}

TEST(EveryStep, SingleAgentWalksStraight) {
  const Scenario s = gt::empty_grid(3, {{0, 0}}, {{0, 2}});
  auto agents = team<DistanceRanker>(1);
  const auto r = run_rank_every_step(s, agents, default_step_limit(s));
  EXPECT_EQ(r.makespan, 2);
  ASSERT_EQ(r.trace.size(), 3u);
  EXPECT_EQ(r.trace[1].positions, (std::vector<Position>{{0, 1}}));
  EXPECT_EQ(r.trace[2].positions, (std::vector<Position>{{0, 2}}));
  EXPECT_FALSE(r.timed_out);
}

TEST(EveryStep, LowerIndexWinsContestedCell) {
  const Scenario s = gt::empty_grid(3, {{1, 0}, {0, 1}}, {{1, 2}, {2, 1}});
  auto agents = scripted({{0, 1}, {1, 0}});
  const auto r = run_rank_every_step(s, agents, 50);
  EXPECT_EQ(r.trace[1].positions, (std::vector<Position>{{1, 1}, {0, 1}}));
  EXPECT_EQ(r.makespan, 3);
  EXPECT_EQ(r.analytic_makespan, 2);
  EXPECT_EQ(r.arrival_times, (std::vector<int>{2, 3}));
  EXPECT_EQ(check_trace(s, r.trace), "");
}

TEST(EveryStep, HeadOnSwapIsAllowed) {
  const Scenario s = gt::empty_grid(4, {{0, 1}, {0, 2}}, {{0, 3}, {0, 0}});
  auto agents = scripted({{0, 1}, {1, 0}});
  const auto r = run_rank_every_step(s, agents, 50);
  EXPECT_EQ(r.trace[1].positions, (std::vector<Position>{{0, 2}, {0, 1}}));
  EXPECT_EQ(r.makespan, 2);
}

TEST(EveryStep, ArrivedAgentKeepsGoal) {
  // Agent 1 arrives on A at step 0; agent 2 keeps asking for A and must take B.
  const Scenario s = gt::empty_grid(3, {{0, 0}, {2, 2}}, {{0, 0}, {2, 0}});
  auto agents = scripted({{0, 1}, {0, 1}});
  const auto r = run_rank_every_step(s, agents, 50);
  EXPECT_FALSE(r.timed_out);
  EXPECT_EQ(r.assignment.goal_of, (std::vector<GoalIndex>{0, 1}));
  EXPECT_EQ(r.arrival_times, (std::vector<int>{0, 2}));
  EXPECT_EQ(check_trace(s, r.trace), "");
  for (const auto& t : r.trace) EXPECT_EQ(t.assignment, (std::vector<GoalIndex>{0, 1}));
}

TEST(EveryStep, TimeoutReportsStepLimit) {
  const Scenario s = gt::corridor();
  auto agents = team<DistanceRanker>(2);
  const auto r = run_rank_every_step(s, agents, 1);
  EXPECT_TRUE(r.timed_out);
  EXPECT_EQ(r.makespan, 1);
  EXPECT_THROW(makespan_of(r), TimedOutEpisode);
  EXPECT_THROW(run_rank_every_step(s, agents, 0), ConfigError);
}

TEST(EveryStep, Deterministic) {
  const Scenario s = generate(default_distribution(), 5);
  auto a = team<DistanceRanker>(s.k);
  auto b = team<DistanceRanker>(s.k);
  EXPECT_EQ(run_rank_every_step(s, a, default_step_limit(s)), run_rank_every_step(s, b, default_step_limit(s)));
}

TEST(Demote, PinnedGoalsMoveBackStably) {
  EXPECT_EQ(demote_goals({0, {2, 0, 3, 1}}, {0, 3}).order, (std::vector<GoalIndex>{2, 1, 0, 3}));
  EXPECT_EQ(demote_goals({0, {2, 0, 1}}, {}).order, (std::vector<GoalIndex>{2, 0, 1}));
}

TEST(CheckTrace, DetectsFaults) {
  const Scenario s = gt::empty_grid(3, {{0, 0}, {2, 2}}, {{0, 2}, {2, 0}}, {{1, 1}});
  auto step = [](int t, std::vector<Position> p) { return TraceStep{t, std::move(p), {0, 1}}; };
  EXPECT_NE(check_trace(s, {step(0, {{0, 0}, {0, 0}})}).find("shares"), std::string::npos);
  EXPECT_NE(check_trace(s, {step(0, {{1, 1}, {0, 0}})}).find("obstacle"), std::string::npos);
  EXPECT_NE(check_trace(s, {step(0, {{3, 0}, {0, 0}})}).find("off the grid"), std::string::npos);
  EXPECT_NE(check_trace(s, {step(0, {{0, 0}, {2, 2}}), step(1, {{0, 2}, {2, 2}})}).find("jumped"),
            std::string::npos);
  EXPECT_EQ(check_trace(s, {step(0, {{0, 0}, {2, 2}}), step(1, {{0, 1}, {2, 2}})}), "");
}

TEST(ProtocolProperties, EquivalenceAndLegalityOnGeneratedSuite) {
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    const Scenario s = generate(default_distribution(), seed);
    const DistanceMatrix m = distance_matrix(s);
    auto distance = team<DistanceRanker>(s.k);
    auto oracle = team<TeamOracle>(s.k);
    EXPECT_EQ(run_rank_once(s, distance).assignment, greedy(m)) << seed;
    EXPECT_EQ(run_rank_once(s, oracle).assignment, optimal(m)) << seed;

    for (auto* agents : {&distance, &oracle}) {
      const auto r = run_rank_every_step(s, *agents, default_step_limit(s));
      EXPECT_EQ(check_trace(s, r.trace), "") << seed;
      EXPECT_FALSE(r.timed_out) << seed;
      EXPECT_EQ(r.trace.size(), static_cast<size_t>(r.makespan) + 1) << seed;
      EXPECT_GE(r.makespan, r.analytic_makespan) << seed;
      for (int i = 0; i < s.k; ++i) EXPECT_EQ(r.trace.back().positions[i], s.goals[r.assignment.goal_of[i]]);
    }
  }
}
