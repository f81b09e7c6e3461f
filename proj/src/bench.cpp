#include "goalassign/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace goalassign {

using nlohmann::json;

std::string to_string(AgentKind kind) {
  switch (kind) {
    case AgentKind::kOptimal: return "optimal";
    case AgentKind::kGreedy: return "greedy";
    case AgentKind::kRandom: return "random";
    case AgentKind::kDistance: return "distance";
    case AgentKind::kOracle: return "oracle";
    case AgentKind::kLlm: return "llm";
  }
  return "unknown";
}

AgentKind parse_agent_kind(std::string_view text) {
  for (AgentKind k : {AgentKind::kOptimal, AgentKind::kGreedy, AgentKind::kRandom, AgentKind::kDistance,
                      AgentKind::kOracle, AgentKind::kLlm})
    if (to_string(k) == text) return k;
  throw ConfigError("unknown agent kind '" + std::string(text) + "'");
}

Mode parse_mode(std::string_view text) {
  if (text == "rank_once") return Mode::kRankOnce;
  if (text == "rank_every_step") return Mode::kRankEveryStep;
  throw ConfigError("unknown mode '" + std::string(text) + "' (rank_once | rank_every_step)");
}

std::vector<StrategySpec> default_strategies() {
  return {
      {"optimal", AgentKind::kOptimal},
      {"greedy", AgentKind::kGreedy},
      {"random", AgentKind::kRandom},
      {"distance-once", AgentKind::kDistance, Mode::kRankOnce},
      {"oracle-once", AgentKind::kOracle, Mode::kRankOnce},
      {"distance-every-step", AgentKind::kDistance, Mode::kRankEveryStep},
      {"oracle-every-step", AgentKind::kOracle, Mode::kRankEveryStep},
  };
}

void ExperimentConfig::check() const {
  distribution.check();
  if (scenario_count < 1) throw ConfigError("scenario_count must be at least 1");
  if (strategies.empty()) throw ConfigError("at least one strategy is required");
  if (step_limit < 0) throw ConfigError("step_limit must be >= 0");
  if (parallelism < 1) throw ConfigError("parallelism must be at least 1");
  std::set<std::string> labels;
  for (const auto& s : strategies) {
    if (s.label.empty() || s.label.find_first_of(",\"\n\r") != std::string::npos)
      throw ConfigError("strategy label '" + s.label + "' must be non-empty and free of commas, quotes and newlines");
    if (!labels.insert(s.label).second) throw ConfigError("duplicate strategy label '" + s.label + "'");
    if (s.kind == AgentKind::kOptimal || s.kind == AgentKind::kOracle) {
      if (distribution.k_range.max > kMaxOptimalAgents)
        throw ConfigError("strategy '" + s.label + "' needs k <= " + std::to_string(kMaxOptimalAgents));
    }
    if (s.kind == AgentKind::kLlm && !llm) throw ConfigError("strategy '" + s.label + "' needs an llm section");
  }
  if (distribution.k_range.max > kMaxOptimalAgents)
    throw ConfigError("gap statistics need the optimal solver, so k_max must be <= " +
                      std::to_string(kMaxOptimalAgents));
  if (llm) llm->check();
  style.check();
}

namespace {

template <typename T>
void read_opt(const json& obj, const char* key, T& out) {
  if (auto it = obj.find(key); it != obj.end()) out = it->get<T>();
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> known, const char* where) {
  for (const auto& [key, _] : obj.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError(std::string(where) + ": unknown field '" + key + "'");
}

LLMConfig llm_from_json(const json& j) {
  reject_unknown(j,
                 {"endpoint", "model", "temperature", "retries", "timeout_seconds", "include_distances",
                  "include_image", "credential_env", "requests_per_minute"},
                 "llm");
  LLMConfig c;
  read_opt(j, "endpoint", c.endpoint);
  read_opt(j, "model", c.model);
  read_opt(j, "temperature", c.temperature);
  read_opt(j, "retries", c.retries);
  read_opt(j, "timeout_seconds", c.timeout_seconds);
  read_opt(j, "include_distances", c.include_distances);
  read_opt(j, "include_image", c.include_image);
  read_opt(j, "credential_env", c.credential_env);
  read_opt(j, "requests_per_minute", c.requests_per_minute);
  return c;
}

json llm_to_json(const LLMConfig& c) {
  return {{"endpoint", c.endpoint},
          {"model", c.model},
          {"temperature", c.temperature},
          {"retries", c.retries},
          {"timeout_seconds", c.timeout_seconds},
          {"include_distances", c.include_distances},
          {"include_image", c.include_image},
          {"credential_env", c.credential_env},
          {"requests_per_minute", c.requests_per_minute}};
}

}  // namespace

ExperimentConfig config_from_text(std::string_view text) {
  ExperimentConfig c;
  try {
    json doc = json::parse(text);
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    reject_unknown(doc,
                   {"distribution", "scenario_count", "seed", "strategies", "step_limit", "parallelism", "output_dir",
                    "llm", "llm_fixture", "save_transcripts", "record_wall_time", "style"},
                   "config");
    if (auto it = doc.find("distribution"); it != doc.end()) {
      const json& d = *it;
      reject_unknown(d, {"n", "k_min", "k_max", "obstacles_min", "obstacles_max", "require_full_reachability"},
                     "distribution");
      read_opt(d, "n", c.distribution.n);
      read_opt(d, "k_min", c.distribution.k_range.min);
      read_opt(d, "k_max", c.distribution.k_range.max);
      read_opt(d, "obstacles_min", c.distribution.obstacle_range.min);
      read_opt(d, "obstacles_max", c.distribution.obstacle_range.max);
      read_opt(d, "require_full_reachability", c.distribution.require_full_reachability);
    }
    read_opt(doc, "scenario_count", c.scenario_count);
    read_opt(doc, "seed", c.seed);
    read_opt(doc, "step_limit", c.step_limit);
    read_opt(doc, "parallelism", c.parallelism);
    if (auto it = doc.find("output_dir"); it != doc.end()) c.output_dir = it->get<std::string>();
    if (auto it = doc.find("strategies"); it != doc.end()) {
      for (const json& s : *it) {
        reject_unknown(s, {"label", "agent", "mode", "include_distances"}, "strategy");
        StrategySpec spec;
        spec.kind = parse_agent_kind(s.at("agent").get<std::string>());
        spec.label = s.value("label", to_string(spec.kind));
        if (auto m = s.find("mode"); m != s.end()) spec.mode = parse_mode(m->get<std::string>());
        read_opt(s, "include_distances", spec.include_distances);
        c.strategies.push_back(std::move(spec));
      }
    } else {
      c.strategies = default_strategies();
    }
    if (auto it = doc.find("llm"); it != doc.end()) c.llm = llm_from_json(*it);
    if (auto it = doc.find("llm_fixture"); it != doc.end()) c.llm_fixture = it->get<std::string>();
    read_opt(doc, "save_transcripts", c.save_transcripts);
    read_opt(doc, "record_wall_time", c.record_wall_time);
    if (auto it = doc.find("style"); it != doc.end()) {
      reject_unknown(*it, {"cell_px", "label_scale", "annotate_cells", "emphasize_border", "diagonal_blockers"},
                     "style");
      read_opt(*it, "cell_px", c.style.cell_px);
      read_opt(*it, "label_scale", c.style.label_scale);
      read_opt(*it, "annotate_cells", c.style.annotate_cells);
      read_opt(*it, "emphasize_border", c.style.emphasize_border);
      read_opt(*it, "diagonal_blockers", c.style.diagonal_blockers);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.check();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) { return config_from_text(read_file(path)); }

std::string to_text(const ExperimentConfig& c) {
  json strategies = json::array();
  for (const auto& s : c.strategies) {
    json j{{"label", s.label}, {"agent", to_string(s.kind)}};
    if (!s.centralized()) {
      j["mode"] = to_string(s.mode);
      j["include_distances"] = s.include_distances;
    }
    strategies.push_back(j);
  }
  json doc{{"distribution",
            {{"n", c.distribution.n},
             {"k_min", c.distribution.k_range.min},
             {"k_max", c.distribution.k_range.max},
             {"obstacles_min", c.distribution.obstacle_range.min},
             {"obstacles_max", c.distribution.obstacle_range.max},
             {"require_full_reachability", c.distribution.require_full_reachability}}},
           {"scenario_count", c.scenario_count},
           {"seed", c.seed},
           {"strategies", strategies},
           {"step_limit", c.step_limit},
           {"parallelism", c.parallelism},
           {"output_dir", c.output_dir.string()},
           {"save_transcripts", c.save_transcripts},
           {"record_wall_time", c.record_wall_time},
           {"style",
            {{"cell_px", c.style.cell_px},
             {"label_scale", c.style.label_scale},
             {"annotate_cells", c.style.annotate_cells},
             {"emphasize_border", c.style.emphasize_border},
             {"diagonal_blockers", c.style.diagonal_blockers}}}};
  if (c.llm) doc["llm"] = llm_to_json(*c.llm);
  if (c.llm_fixture) doc["llm_fixture"] = c.llm_fixture->string();
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.scenario_id) + ',' + std::to_string(r.seed) + ',' + std::to_string(r.k) + ',' + r.strategy +
           ',' + std::to_string(r.makespan) + ',' + std::to_string(r.optimal) + ',' + std::to_string(r.gap) + ',' +
           (r.timed_out ? "1" : "0") + ',' + std::to_string(r.ms) + '\n';
  }
  return out;
}

namespace {

template <typename T>
T parse_number(const std::string& field, int line) {
  try {
    std::size_t used = 0;
    long long v;
    if constexpr (std::is_same_v<T, std::uint64_t>) {
      if (!field.empty() && field[0] == '-') throw std::invalid_argument("negative");
      auto u = std::stoull(field, &used);
      if (used != field.size()) throw std::invalid_argument("trailing");
      return u;
    } else {
      v = std::stoll(field, &used);
      if (used != field.size()) throw std::invalid_argument("trailing");
      return static_cast<T>(v);
    }
  } catch (const std::exception&) {
    throw MalformedFile("results csv line " + std::to_string(line) + ": bad number '" + field + "'");
  }
}

}  // namespace

std::vector<ResultRow> rows_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw MalformedFile("results csv is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw MalformedFile("results csv header mismatch: '" + line + "'");
  std::vector<ResultRow> rows;
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    while (true) {
      auto comma = line.find(',', start);
      f.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (f.size() != 9) throw MalformedFile("results csv line " + std::to_string(number) + ": expected 9 fields");
    ResultRow r;
    r.scenario_id = parse_number<int>(f[0], number);
    r.seed = parse_number<std::uint64_t>(f[1], number);
    r.k = parse_number<int>(f[2], number);
    r.strategy = f[3];
    r.makespan = parse_number<int>(f[4], number);
    r.optimal = parse_number<int>(f[5], number);
    r.gap = parse_number<int>(f[6], number);
    if (f[7] != "0" && f[7] != "1") throw MalformedFile("results csv line " + std::to_string(number) + ": timed_out");
    r.timed_out = f[7] == "1";
    r.ms = parse_number<std::int64_t>(f[8], number);
    rows.push_back(std::move(r));
  }
  return rows;
}

const StrategySummary* Summary::find(std::string_view label) const {
  for (const auto& s : strategies)
    if (s.label == label) return &s;
  return nullptr;
}

Summary summarize(const std::vector<ResultRow>& rows, const std::map<std::string, int>& fallbacks) {
  Summary out;
  std::map<std::string, std::size_t> index;
  std::map<std::string, std::map<int, long long>> gap_sum;
  std::map<std::string, long long> makespan_sum, gap_total;
  for (const auto& r : rows) {
    auto [it, inserted] = index.emplace(r.strategy, out.strategies.size());
    if (inserted) out.strategies.push_back({r.strategy});
    auto& s = out.strategies[it->second];
    ++s.runs;
    makespan_sum[r.strategy] += r.makespan;
    gap_total[r.strategy] += r.gap;
    if (r.timed_out) ++s.timeouts;
    gap_sum[r.strategy][r.k] += r.gap;
    ++out.runs_by_k[r.strategy][r.k];
  }
  for (auto& s : out.strategies) {
    s.mean_makespan = static_cast<double>(makespan_sum[s.label]) / s.runs;
    s.mean_gap = static_cast<double>(gap_total[s.label]) / s.runs;
    if (auto it = fallbacks.find(s.label); it != fallbacks.end()) s.fallbacks = it->second;
    for (const auto& [k, sum] : gap_sum[s.label])
      out.mean_gap_by_k[s.label][k] = static_cast<double>(sum) / out.runs_by_k[s.label][k];
  }
  return out;
}

namespace {

std::string fixed(double v, int digits = 2) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

std::string summary_text(const Summary& summary) {
  std::size_t w = 8;
  for (const auto& s : summary.strategies) w = std::max(w, s.label.size() + 2);

  std::ostringstream out;
  out << "Mean makespan per strategy (timesteps until all agents reach goals)\n";
  out << pad("strategy", w) << pad("runs", 7) << pad("makespan", 10) << pad("gap", 8) << pad("timeouts", 10)
      << "fallbacks\n";
  for (const auto& s : summary.strategies)
    out << pad(s.label, w) << pad(std::to_string(s.runs), 7) << pad(fixed(s.mean_makespan), 10)
        << pad(fixed(s.mean_gap), 8) << pad(std::to_string(s.timeouts), 10) << s.fallbacks << '\n';

  std::set<int> ks;
  for (const auto& [_, by_k] : summary.mean_gap_by_k)
    for (const auto& [k, __] : by_k) ks.insert(k);
  out << "\nMean gap above optimal by number of agents\n" << pad("strategy", w);
  for (int k : ks) out << pad("k=" + std::to_string(k), 8);
  out << '\n';
  for (const auto& s : summary.strategies) {
    out << pad(s.label, w);
    const auto& by_k = summary.mean_gap_by_k.at(s.label);
    for (int k : ks) {
      auto it = by_k.find(k);
      out << pad(it == by_k.end() ? "-" : fixed(it->second), 8);
    }
    out << '\n';
  }
  out << "\nTimed-out episodes contribute makespan = step limit to the means.\n";
  return out.str();
}

std::vector<ChartSeries> gap_series(const Summary& summary) {
  std::vector<ChartSeries> out;
  for (const auto& s : summary.strategies) {
    ChartSeries series{s.label, {}};
    for (const auto& [k, g] : summary.mean_gap_by_k.at(s.label)) series.points.push_back({double(k), g});
    out.push_back(std::move(series));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

EpisodeResult analytic_episode(const DistanceMatrix& matrix, Assignment a, const std::string& label) {
  EpisodeResult r;
  for (int i = 0; i < a.size(); ++i) r.arrival_times.push_back(matrix(i, a.goal_of[i]).value());
  r.makespan = a.makespan;
  r.analytic_makespan = a.makespan;
  r.assignment = std::move(a);
  r.strategy = label;
  return r;
}

}  // namespace

StrategyOutcome run_strategy(const Scenario& scenario, const StrategySpec& spec, const RunContext& context) {
  StrategyOutcome out;
  if (spec.centralized()) {
    const DistanceMatrix m = distance_matrix(scenario);
    Assignment a;
    switch (spec.kind) {
      case AgentKind::kOptimal: a = optimal(m); break;
      case AgentKind::kGreedy: a = greedy(m); break;
      default: a = random_assign(m, derive_seed(scenario.seed, hash_label(spec.label))); break;
    }
    out.episode = analytic_episode(m, std::move(a), spec.label);
    return out;
  }

  Agents agents;
  std::vector<LlmAgent*> llm_agents;
  for (int i = 0; i < scenario.k; ++i) {
    switch (spec.kind) {
      case AgentKind::kDistance: agents.push_back(std::make_unique<DistanceRanker>()); break;
      case AgentKind::kOracle: agents.push_back(std::make_unique<TeamOracle>()); break;
      case AgentKind::kLlm: {
        if (!context.llm || !context.transport) throw ConfigError("llm strategy without llm configuration");
        LLMConfig cfg = *context.llm;
        cfg.include_distances = spec.include_distances;
        auto agent = std::make_unique<LlmAgent>(cfg, context.transport, context.limiter);
        llm_agents.push_back(agent.get());
        agents.push_back(std::move(agent));
        break;
      }
      default: throw ConfigError("not a decentralized strategy");
    }
  }
  EpisodeOptions options{spec.include_distances, spec.label};
  const int limit = context.step_limit > 0 ? context.step_limit : default_step_limit(scenario);
  out.episode = spec.mode == Mode::kRankOnce ? run_rank_once(scenario, agents, options)
                                             : run_rank_every_step(scenario, agents, limit, options);
  for (auto* a : llm_agents) out.transcript.insert(out.transcript.end(), a->transcript().begin(), a->transcript().end());
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << contents;
  if (!out) throw IoError("write failed: " + path.string());
}

namespace {

void write_outputs(const std::filesystem::path& dir, const std::vector<ResultRow>& rows, const Summary& summary) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  write_file(dir / "results.csv", rows_to_csv(rows));
  write_file(dir / "summary.txt", summary_text(summary));
  render_chart(gap_series(summary), dir / "gap_by_agents.svg");
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, bool write_files) {
  config.check();

  RunContext context;
  context.step_limit = config.step_limit;
  const bool uses_llm = std::any_of(config.strategies.begin(), config.strategies.end(),
                                    [](const StrategySpec& s) { return s.kind == AgentKind::kLlm; });
  if (uses_llm) {
    context.llm = config.llm;
    if (config.llm_fixture)
      context.transport = std::make_shared<FixtureTransport>(FixtureTransport::load(*config.llm_fixture));
    else
      context.transport = std::make_shared<HttpChatTransport>(*config.llm);
    context.limiter = std::make_shared<RateLimiter>(config.llm->requests_per_minute);
  }

  const int count = config.scenario_count;
  const std::size_t per = config.strategies.size();
  ExperimentResult result;
  result.scenarios.resize(static_cast<size_t>(count));
  result.rows.resize(static_cast<size_t>(count) * per);
  result.episodes.resize(result.rows.size());
  std::vector<std::vector<Exchange>> transcripts(result.rows.size());

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        const Scenario s = generate(config.distribution, scenario_seed(config.seed, i));
        const int best = optimal(distance_matrix(s)).makespan;
        for (std::size_t j = 0; j < per; ++j) {
          const auto& spec = config.strategies[j];
          const auto start = std::chrono::steady_clock::now();
          StrategyOutcome outcome = run_strategy(s, spec, context);
          const auto elapsed = std::chrono::steady_clock::now() - start;
          const std::size_t slot = static_cast<std::size_t>(i) * per + j;
          ResultRow& row = result.rows[slot];
          row.scenario_id = i;
          row.seed = s.seed;
          row.k = s.k;
          row.strategy = spec.label;
          row.makespan = outcome.episode.makespan;
          row.optimal = best;
          row.gap = row.makespan - best;
          row.timed_out = outcome.episode.timed_out;
          row.ms = config.record_wall_time
                       ? std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count()
                       : 0;
          result.episodes[slot] = std::move(outcome.episode);
          transcripts[slot] = std::move(outcome.transcript);
        }
        result.scenarios[static_cast<size_t>(i)] = s;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };

  const int threads = std::min(config.parallelism, count);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::map<std::string, int> fallbacks;
  for (std::size_t r = 0; r < result.rows.size(); ++r)
    fallbacks[result.rows[r].strategy] += static_cast<int>(result.episodes[r].fallbacks.size());
  result.summary = summarize(result.rows, fallbacks);

  if (write_files) {
    write_outputs(config.output_dir, result.rows, result.summary);
    if (config.save_transcripts && uses_llm) {
      const auto dir = config.output_dir / "transcripts";
      std::filesystem::create_directories(dir);
      for (std::size_t r = 0; r < result.rows.size(); ++r) {
        if (transcripts[r].empty()) continue;
        json doc = json::array();
        for (const auto& x : transcripts[r]) doc.push_back({{"request", json::parse(x.request_json)}, {"response", x.response_text}});
        write_file(dir / ("scenario_" + std::to_string(result.rows[r].scenario_id) + "_" + result.rows[r].strategy + ".json"),
                   doc.dump(2) + "\n");
      }
    }
  }
  return result;
}

Summary report(const std::filesystem::path& rows_csv, const std::filesystem::path& out_dir) {
  const auto rows = rows_from_csv(read_file(rows_csv));
  if (rows.empty()) throw MalformedFile("results csv has no rows");
  Summary summary = summarize(rows);
  write_outputs(out_dir, rows, summary);
  return summary;
}

}  // namespace goalassign
