// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

#include "goalassign/bench.hpp"
#include "support.hpp"

using namespace goalassign;
namespace gt = goalassign::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (limit_s > 0 && secs > limit_s) {
    o.pass = false;
    o.detail += " (over the " + std::to_string(static_cast<int>(limit_s)) + " s limit)";
  }
  if (!o.pass) ++failures;
  std::printf("[%s] AC%d %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* format, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c, d);
  return buf;
}

std::vector<std::vector<int>> to_ints(const DistanceMatrix& m) {
  std::vector<std::vector<int>> out(m.size(), std::vector<int>(m.size()));
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) out[i][j] = m(i, j).finite() ? m(i, j).value() : gt::kInf;
  return out;
}

ExperimentResult run_reference_suite() {
  ExperimentConfig c;
  c.distribution = default_distribution();
  c.scenario_count = 100;
  c.seed = 0;
  c.strategies = default_strategies();
  return run_experiment(c, false);
}

const ExperimentResult& reference_suite() {
  static const ExperimentResult result = run_reference_suite();
  return result;
}

Outcome ac1() {
  ScenarioDistribution d{5, {1, 3}, {0, 10}, false};
  long long pairs = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const Scenario s = generate(d, derive_seed(101, seed));
    const auto fw = gt::floyd_warshall(s);
    for (int a = 0; a < 25; ++a) {
      if (s.is_obstacle(s.cell_at(a))) continue;
      const auto field = bfs_distances(s, s.cell_at(a));
      for (int b = 0; b < 25; ++b) {
        if (s.is_obstacle(s.cell_at(b))) continue;
        const auto got = field.at(s.cell_at(b));
        const bool same = fw[a][b] >= gt::kInf ? !got.has_value() : got == fw[a][b];
        if (!same) return {false, "mismatch on scenario seed " + std::to_string(s.seed)};
        ++pairs;
      }
    }
  }
  return {true, "500 scenarios, " + std::to_string(pairs) + " cell pairs identical"};
}

Outcome ac2() {
  ScenarioDistribution d{8, {1, 5}, {0, 12}, true};
  int by_k[6] = {};
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const Scenario s = generate(d, derive_seed(202, seed));
    const auto m = distance_matrix(s);
    const auto brute = gt::enumerate_assignments(to_ints(m));
    const auto a = optimal(m);
    if (a.makespan != brute.makespan || a.total_distance != brute.total)
      return {false, "scenario seed " + std::to_string(s.seed) + ": solver " + std::to_string(a.makespan) +
                         " vs enumerator " + std::to_string(brute.makespan)};
    ++by_k[s.k];
  }
  std::ostringstream o;
  o << "500 scenarios identical (k=1..5: " << by_k[1] << '/' << by_k[2] << '/' << by_k[3] << '/' << by_k[4] << '/'
    << by_k[5] << ')';
  return {true, o.str()};
}

Outcome ac3() {
  const StrategySpec random{"random", AgentKind::kRandom};
  for (int i = 0; i < 1000; ++i) {
    const Scenario s = generate(default_distribution(), scenario_seed(303, i));
    const auto m = distance_matrix(s);
    const int best = optimal(m).makespan;
    const int g = greedy(m).makespan;
    const int r = run_strategy(s, random, {}).episode.makespan;
    if (best > g || best > r)
      return {false, "scenario " + std::to_string(i) + ": optimal " + std::to_string(best) + " greedy " +
                         std::to_string(g) + " random " + std::to_string(r)};
  }
  return {true, "1000 scenarios, optimal <= greedy and optimal <= random, gap >= 0"};
}

Outcome ac4() {
  const auto& suite = reference_suite();
  for (const Scenario& s : suite.scenarios) {
    const auto m = distance_matrix(s);
    Agents distance, oracle;
    for (int i = 0; i < s.k; ++i) {
      distance.push_back(std::make_unique<DistanceRanker>());
      oracle.push_back(std::make_unique<TeamOracle>());
    }
    if (run_rank_once(s, distance).assignment != greedy(m))
      return {false, "distance agents differ from greedy on seed " + std::to_string(s.seed)};
    if (run_rank_once(s, oracle).makespan != optimal(m).makespan)
      return {false, "oracle agents miss optimal on seed " + std::to_string(s.seed)};
  }
  return {true, std::to_string(suite.scenarios.size()) + " scenarios: distance == greedy, oracle == optimal"};
}

Outcome ac5() {
  // Timed from scratch; the cached suite is reused by later criteria.
  const Summary sum = run_reference_suite().summary;
  const double opt = sum.find("optimal")->mean_makespan;
  const double gr = sum.find("greedy")->mean_makespan;
  const double rnd = sum.find("random")->mean_makespan;
  const bool ok = opt < gr && gr < rnd && gr - opt >= 1.5 && gr - opt <= 6.5 && rnd - opt >= 3.5 && rnd - opt <= 9.5;
  return {ok, fmt("optimal %.2f, greedy %.2f (+%.2f), random %.2f", opt, gr, gr - opt, rnd) +
                  fmt(" (+%.2f)", rnd - opt)};
}

Outcome ac6() {
  const auto& by_k = reference_suite().summary.mean_gap_by_k;
  const double g2 = by_k.at("greedy").at(2), g6 = by_k.at("greedy").at(6);
  const double r2 = by_k.at("random").at(2), r6 = by_k.at("random").at(6);
  bool oracle_zero = true;
  for (const auto& [k, gap] : by_k.at("oracle-once")) oracle_zero = oracle_zero && gap == 0;
  return {g6 > g2 && r6 > r2 && oracle_zero,
          fmt("greedy gap k=2 %.2f -> k=6 %.2f, random %.2f -> %.2f", g2, g6, r2, r6) +
              (oracle_zero ? ", oracle gap 0 at every k" : ", oracle gap nonzero")};
}

Outcome ac7() {
  const auto& suite = reference_suite();
  int traces = 0, states = 0;
  for (std::size_t r = 0; r < suite.rows.size(); ++r) {
    const auto& ep = suite.episodes[r];
    if (ep.mode != Mode::kRankEveryStep) continue;
    const Scenario& s = suite.scenarios[static_cast<size_t>(suite.rows[r].scenario_id)];
    if (auto fault = check_trace(s, ep.trace); !fault.empty())
      return {false, suite.rows[r].strategy + " on scenario " + std::to_string(suite.rows[r].scenario_id) + ": " + fault};
    ++traces;
    states += static_cast<int>(ep.trace.size());
  }
  return {traces > 0, std::to_string(traces) + " traces, " + std::to_string(states) + " states legal"};
}

Outcome ac8() {
  const Scenario s = gt::small_world();
  Observation obs;
  obs.scenario = &s;
  obs.positions = s.agents;
  obs.self = 1;
  obs.remaining_goals = {0, 1, 2};
  obs.active_agents = {0, 1, 2};
  LLMConfig cfg;
  cfg.retries = 2;
  cfg.credential_env.clear();
  const auto path = std::filesystem::temp_directory_path() / "goalassign_acceptance_fixture.json";

  // Record canned transcripts, then replay them through the fixture transport.
  struct Case {
    std::vector<std::string> script;
    std::vector<GoalIndex> expect;
    int retries;
    bool fallback;
  };
  const std::vector<Case> cases = {
      {{"Agent 2 is closest to A.\nRANKING: A > B > C"}, {0, 1, 2}, 0, false},
      {{"I choose A", "RANKING: A > A > C", "RANKING: C > A > B"}, {2, 0, 1}, 2, false},
      {{"no idea"}, distance_ranker(obs).order, 2, true},
  };
  for (std::size_t c = 0; c < cases.size(); ++c) {
    ScriptedTransport scripted(cases[c].script);
    RecordingTransport recorder(scripted);
    LlmAgent(cfg, std::shared_ptr<ChatTransport>(&recorder, [](ChatTransport*) {})).decide(obs);
    recorder.fixture().save(path);

    auto replay = std::make_shared<FixtureTransport>(FixtureTransport::load(path));
    for (int run = 0; run < 2; ++run) {
      const Decision d = LlmAgent(cfg, replay).decide(obs);
      if (d.ranking.order != cases[c].expect || d.retries != cases[c].retries || d.fallback != cases[c].fallback)
        return {false, "fixture case " + std::to_string(c) + " replayed wrongly"};
    }
  }

  int perms = 0;
  for (int k = 1; k <= 6; ++k) {
    std::vector<GoalIndex> order(k);
    for (int j = 0; j < k; ++j) order[j] = j;
    do {
      if (parse_ranking("RANKING: " + format_ranking(order), 0, k).order != order)
        return {false, "parse(format) differs for " + format_ranking(order)};
      ++perms;
    } while (std::next_permutation(order.begin(), order.end()));
  }
  return {true, "valid, retried and fallback transcripts replay offline; parse(format) identity over " +
                    std::to_string(perms) + " permutations"};
}

Outcome ac9() {
  ExperimentConfig c;
  c.scenario_count = 100;
  c.seed = 0;
  c.strategies = default_strategies();
  c.parallelism = 4;
  const auto base = std::filesystem::temp_directory_path() / "goalassign_acceptance_ac9";
  std::string out[2];
  for (int run = 0; run < 2; ++run) {
    c.output_dir = base / std::to_string(run);
    std::filesystem::remove_all(c.output_dir);
    run_experiment(c);
    out[run] = read_file(c.output_dir / "results.csv");
  }
  return {out[0] == out[1] && !out[0].empty(),
          out[0] == out[1] ? std::to_string(out[0].size()) + " bytes identical" : "results.csv differs"};
}

}  // namespace

int main() {
  criterion(1, "BFS matches Floyd-Warshall", 10, ac1);
  criterion(2, "optimal matches exhaustive enumerator", 30, ac2);
  criterion(3, "dominance of optimal", 120, ac3);
  criterion(4, "protocol reproduces centralized assignments", 0, ac4);
  criterion(5, "mean makespan ordering and bands", 60, ac5);
  criterion(6, "gap grows with agent count", 0, ac6);
  criterion(7, "every-step traces are legal", 0, ac7);
  criterion(8, "offline language-model plumbing", 0, ac8);
  criterion(9, "byte-identical results.csv", 0, ac9);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
