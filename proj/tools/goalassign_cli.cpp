// goalassign: scenario generation, solving, rendering and benchmark runs.
#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "goalassign/bench.hpp"

namespace ga = goalassign;

namespace {

struct Common {
  std::string format = "text";
};

ga::ScenarioDistribution distribution_from(const std::string& config_path) {
  if (config_path.empty()) return ga::default_distribution();
  return ga::load_config(config_path).distribution;
}

int cmd_generate(const Common& common, int count, std::uint64_t seed, const std::string& out,
                 const std::string& config_path) {
  const auto dist = distribution_from(config_path);
  std::filesystem::create_directories(out);
  if (common.format == "csv") std::cout << "index,path,seed,k,obstacles\n";
  for (int i = 0; i < count; ++i) {
    const ga::Scenario s = ga::generate(dist, ga::scenario_seed(seed, i));
    char name[32];
    std::snprintf(name, sizeof name, "scenario_%03d.json", i);
    const auto path = std::filesystem::path(out) / name;
    ga::save(s, path);
    if (common.format == "csv")
      std::cout << i << ',' << path.string() << ',' << s.seed << ',' << s.k << ',' << s.obstacles.size() << '\n';
    else
      std::cout << path.string() << "  k=" << s.k << " obstacles=" << s.obstacles.size() << '\n';
  }
  return 0;
}

int cmd_run(const Common& common, const std::string& config_path, const std::string& out,
            std::optional<std::uint64_t> seed) {
  ga::ExperimentConfig config = ga::load_config(config_path);
  if (!out.empty()) config.output_dir = out;
  if (seed) config.seed = *seed;
  const auto result = ga::run_experiment(config);
  if (common.format == "csv")
    std::cout << ga::rows_to_csv(result.rows);
  else
    std::cout << ga::summary_text(result.summary) << "\nwrote " << (config.output_dir / "results.csv").string() << ", "
              << (config.output_dir / "summary.txt").string() << ", "
              << (config.output_dir / "gap_by_agents.svg").string() << '\n';
  return 0;
}

int cmd_solve(const Common& common, const std::string& scenario_path, const std::string& strategy,
              const std::string& mode, bool no_distances, std::optional<std::uint64_t> seed, int step_limit) {
  ga::Scenario s = ga::load(scenario_path);
  if (seed) s.seed = *seed;
  ga::StrategySpec spec{strategy, ga::parse_agent_kind(strategy), ga::parse_mode(mode), !no_distances};
  if (spec.kind == ga::AgentKind::kLlm) throw ga::ConfigError("solve does not drive llm agents; use run with a config");
  ga::RunContext context;
  context.step_limit = step_limit;
  const auto outcome = ga::run_strategy(s, spec, context);
  const auto& ep = outcome.episode;
  const auto m = ga::distance_matrix(s);

  if (common.format == "csv") {
    std::cout << "agent,goal,distance,arrival\n";
    for (int i = 0; i < s.k; ++i)
      std::cout << i + 1 << ',' << ga::goal_label(ep.assignment.goal_of[i]) << ','
                << m(i, ep.assignment.goal_of[i]).value() << ',' << ep.arrival_times[i] << '\n';
    std::cout << "makespan," << ep.makespan << ",,\n";
  } else {
    std::cout << ga::describe(ep.assignment) << " makespan=" << ep.makespan;
    if (ep.timed_out) std::cout << " (timed out)";
    if (ep.mode == ga::Mode::kRankEveryStep && ep.analytic_makespan != ep.makespan)
      std::cout << " analytic=" << ep.analytic_makespan;
    std::cout << '\n';
  }
  return 0;
}

int cmd_render(const std::string& scenario_path, const std::string& image, const std::string& config_path) {
  const ga::Scenario s = ga::load(scenario_path);
  if (image.empty()) {
    std::cout << ga::render_ascii(s, s.agents);
    return 0;
  }
  ga::RenderStyle style;
  if (!config_path.empty()) style = ga::load_config(config_path).style;
  const auto png = ga::render_image(s, s.agents, style);
  ga::write_file(image, std::string_view(reinterpret_cast<const char*>(png.data()), png.size()));
  std::cout << "wrote " << image << '\n';
  return 0;
}

int cmd_report(const Common& common, const std::string& rows, const std::string& out) {
  const auto summary = ga::report(rows, out);
  if (common.format == "csv") {
    std::cout << "strategy,runs,mean_makespan,mean_gap,timeouts\n";
    for (const auto& s : summary.strategies)
      std::cout << s.label << ',' << s.runs << ',' << s.mean_makespan << ',' << s.mean_gap << ',' << s.timeouts << '\n';
  } else {
    std::cout << ga::summary_text(summary);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized multi-agent goal assignment: scenarios, solvers and benchmarks"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--format", common.format, "Output format")->check(CLI::IsMember({"csv", "text"}));

  int count = 1;
  std::uint64_t seed_value = 0;
  std::string out, config, scenario, image, rows;
  std::string strategy = "optimal", mode = "rank_once";
  bool no_distances = false;
  int step_limit = 0;

  auto* gen = app.add_subcommand("generate", "Write random scenario files");
  gen->add_option("--count", count, "Number of scenarios")->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed_value, "Master seed");
  gen->add_option("--out", out, "Output directory")->default_str("scenarios");
  gen->add_option("--config", config, "Take the distribution from this config file")->check(CLI::ExistingFile);

  auto* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("--config", config, "Experiment config file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "Override the output directory");
  auto* run_seed = run->add_option("--seed", seed_value, "Override the master seed");

  auto* solve = app.add_subcommand("solve", "Solve one scenario with one strategy");
  solve->add_option("--scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  solve->add_option("--strategy", strategy, "optimal | greedy | random | distance | oracle")
      ->check(CLI::IsMember({"optimal", "greedy", "random", "distance", "oracle"}));
  solve->add_option("--mode", mode, "rank_once | rank_every_step")
      ->check(CLI::IsMember({"rank_once", "rank_every_step"}));
  solve->add_flag("--no-distances", no_distances, "Hide the distance table from agents");
  auto* solve_seed = solve->add_option("--seed", seed_value, "Seed for the random strategy");
  solve->add_option("--step-limit", step_limit, "Step limit for rank_every_step (default 4*n^2)");

  auto* render = app.add_subcommand("render", "Draw a scenario as text or PNG");
  render->add_option("--scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  render->add_option("--image", image, "Write a PNG here instead of printing text");
  render->add_option("--config", config, "Take the render style from this config file")->check(CLI::ExistingFile);

  auto* rep = app.add_subcommand("report", "Summarize an existing results.csv");
  rep->add_option("--rows", rows, "results.csv")->required()->check(CLI::ExistingFile);
  rep->add_option("--out", out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*gen) return cmd_generate(common, count, seed_value, out.empty() ? "scenarios" : out, config);
    if (*run)
      return cmd_run(common, config, out, *run_seed ? std::optional<std::uint64_t>(seed_value) : std::nullopt);
    if (*solve)
      return cmd_solve(common, scenario, strategy, mode, no_distances,
                       *solve_seed ? std::optional<std::uint64_t>(seed_value) : std::nullopt, step_limit);
    if (*render) return cmd_render(scenario, image, config);
    if (*rep) return cmd_report(common, rows, out);
  } catch (const ga::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
