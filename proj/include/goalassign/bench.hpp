#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "goalassign/agents.hpp"
#include "goalassign/protocol.hpp"
#include "goalassign/random.hpp"
#include "goalassign/render.hpp"
#include "goalassign/world.hpp"

namespace goalassign {

enum class AgentKind { kOptimal, kGreedy, kRandom, kDistance, kOracle, kLlm };

std::string to_string(AgentKind kind);
AgentKind parse_agent_kind(std::string_view text);
Mode parse_mode(std::string_view text);

struct StrategySpec {
  std::string label;
  AgentKind kind = AgentKind::kGreedy;
  Mode mode = Mode::kRankOnce;  // ignored by the centralized kinds
  bool include_distances = true;

  bool centralized() const {
    return kind == AgentKind::kOptimal || kind == AgentKind::kGreedy || kind == AgentKind::kRandom;
  }
  bool deterministic() const { return kind != AgentKind::kLlm; }
};

struct ExperimentConfig {
  ScenarioDistribution distribution;
  int scenario_count = 100;
  std::uint64_t seed = 0;
  std::vector<StrategySpec> strategies;
  int step_limit = 0;  // 0 means 4 * n^2
  int parallelism = 1;
  std::filesystem::path output_dir = "results";
  std::optional<LLMConfig> llm;
  std::optional<std::filesystem::path> llm_fixture;  // offline replay file
  bool save_transcripts = false;
  bool record_wall_time = false;  // otherwise the ms column is 0
  RenderStyle style;

  // Throws ConfigError.
  void check() const;
};

// Optimal, greedy, random, plus rank-once / every-step protocol variants with
// distance-ranking and team-oracle agents.
std::vector<StrategySpec> default_strategies();

ExperimentConfig config_from_text(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string to_text(const ExperimentConfig& config);

// Seed of scenario `index` in a suite; independent of the suite size.
inline std::uint64_t scenario_seed(std::uint64_t master, int index) {
  return derive_seed(master, static_cast<std::uint64_t>(index));
}

struct ResultRow {
  int scenario_id = 0;
  std::uint64_t seed = 0;
  int k = 0;
  std::string strategy;
  int makespan = 0;
  int optimal = 0;
  int gap = 0;
  bool timed_out = false;
  std::int64_t ms = 0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

inline constexpr std::string_view kCsvHeader = "scenario_id,seed,k,strategy,makespan,optimal,gap,timed_out,ms";

std::string rows_to_csv(const std::vector<ResultRow>& rows);
// Throws MalformedFile.
std::vector<ResultRow> rows_from_csv(std::string_view text);

struct StrategySummary {
  std::string label;
  int runs = 0;
  double mean_makespan = 0;
  double mean_gap = 0;
  int timeouts = 0;
  int fallbacks = 0;
};

struct Summary {
  std::vector<StrategySummary> strategies;                      // first-seen order
  std::map<std::string, std::map<int, double>> mean_gap_by_k;  // label -> k -> mean gap
  std::map<std::string, std::map<int, int>> runs_by_k;

  const StrategySummary* find(std::string_view label) const;
};

// Fallback tallies are optional because results.csv does not carry them.
Summary summarize(const std::vector<ResultRow>& rows, const std::map<std::string, int>& fallbacks = {});
std::string summary_text(const Summary& summary);
std::vector<ChartSeries> gap_series(const Summary& summary);

// Shared per-experiment state handed to every strategy run.
struct RunContext {
  int step_limit = 0;
  std::optional<LLMConfig> llm;
  std::shared_ptr<ChatTransport> transport;
  std::shared_ptr<RateLimiter> limiter;
};

struct StrategyOutcome {
  EpisodeResult episode;
  std::vector<Exchange> transcript;
};

// Runs one strategy on one scenario. Centralized kinds produce an analytic
// episode with no trace.
StrategyOutcome run_strategy(const Scenario& scenario, const StrategySpec& spec, const RunContext& context);

struct ExperimentResult {
  std::vector<ResultRow> rows;
  Summary summary;
  std::vector<Scenario> scenarios;
  std::vector<EpisodeResult> episodes;  // parallel to rows
};

// Builds the suite, runs every strategy, and (when write_files) writes
// results.csv, summary.txt and gap_by_agents.svg under output_dir.
ExperimentResult run_experiment(const ExperimentConfig& config, bool write_files = true);

// Writes summary.txt and gap_by_agents.svg for an existing results.csv.
Summary report(const std::filesystem::path& rows_csv, const std::filesystem::path& out_dir);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace goalassign
