#include "goalassign/agents.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "goalassign/render.hpp"

namespace goalassign {

using nlohmann::json;

DistanceMatrix Observation::distances_or_compute() const {
  if (distances) return *distances;
  return distance_matrix(*scenario, positions);
}

Ranking distance_ranker(const Observation& observation) {
  return {observation.self, distance_order(observation.distances_or_compute(), observation.self)};
}

Ranking team_oracle(const Observation& observation) {
  const DistanceMatrix full = observation.distances_or_compute();
  const auto& active = observation.active_agents;
  const auto& remaining = observation.remaining_goals;
  if (active.size() != remaining.size()) throw Infeasible("team oracle: active agents and remaining goals differ");

  // Solve the sub-problem over agents that still move and goals still free.
  const int m = static_cast<int>(active.size());
  DistanceMatrix sub(m);
  int self_row = -1;
  for (int a = 0; a < m; ++a) {
    if (active[a] == observation.self) self_row = a;
    for (int g = 0; g < m; ++g) sub(a, g) = full(active[a], remaining[g]);
  }
  if (self_row < 0) throw Infeasible("team oracle: observing agent is not active");

  const GoalIndex mine = remaining[optimal(sub).goal_of[self_row]];
  Ranking ranking{observation.self, {mine}};
  for (GoalIndex g : distance_order(full, observation.self))
    if (g != mine) ranking.order.push_back(g);
  return ranking;
}

Decision ScriptedAgent::decide(const Observation& observation) {
  if (script_.empty()) throw AgentFailure("scripted agent has no rankings");
  const auto& order = script_[std::min(next_, script_.size() - 1)];
  ++next_;
  return {Ranking{observation.self, order}};
}

// ---------------------------------------------------------------------------

std::string format_ranking(const std::vector<GoalIndex>& order) {
  std::string out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i) out += " > ";
    out += goal_label(order[i]);
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

constexpr std::string_view kRankingTag = "RANKING:";

}  // namespace

Ranking parse_ranking(std::string_view response, AgentIndex agent, int k) {
  std::optional<std::string_view> found;
  std::size_t start = 0;
  while (start <= response.size()) {
    auto end = response.find('\n', start);
    if (end == std::string_view::npos) end = response.size();
    auto line = trim(response.substr(start, end - start));
    if (line.starts_with(kRankingTag)) found = line.substr(kRankingTag.size());
    start = end + 1;
  }
  if (!found) throw MalformedResponse("no line starting with RANKING:");

  Ranking ranking{agent, {}};
  std::vector<char> seen(static_cast<size_t>(k), 0);
  std::string_view rest = *found;
  while (true) {
    auto sep = rest.find('>');
    auto token = trim(rest.substr(0, sep));
    GoalIndex g = goal_index(token);
    if (g < 0 || g >= k) throw MalformedResponse("unknown goal label '" + std::string(token) + "'");
    if (seen[g]) throw MalformedResponse("goal " + std::string(token) + " listed twice");
    seen[g] = 1;
    ranking.order.push_back(g);
    if (sep == std::string_view::npos) break;
    rest = rest.substr(sep + 1);
  }
  if (static_cast<int>(ranking.order.size()) != k)
    throw MalformedResponse("ranking lists " + std::to_string(ranking.order.size()) + " of " + std::to_string(k) +
                            " goals");
  return ranking;
}

void LLMConfig::check() const {
  if (retries < 0) throw ConfigError("llm: retries must be >= 0");
  if (!(timeout_seconds > 0)) throw ConfigError("llm: timeout must be > 0");
  if (requests_per_minute < 0) throw ConfigError("llm: requests_per_minute must be >= 0");
}

const std::vector<std::string>& reasoning_checklist() {
  static const std::vector<std::string> steps = {
      "List every remaining goal and estimate which agent is fastest to reach each one.",
      "Draft a full assignment (agents → goals, no duplicates).",
      "Compute the assignment’s longest path length.",
      "Try at least one alternative assignment; select the one with the smallest maximum path.",
      "Try to resolve conflicts in case of ties.",
  };
  return steps;
}

namespace {

std::string cell(Position p) { return "(" + std::to_string(p.row) + "," + std::to_string(p.col) + ")"; }

}  // namespace

PromptBundle build_prompt(const Observation& obs, const LLMConfig& config) {
  const Scenario& s = *obs.scenario;
  const int k = s.k;
  PromptBundle bundle;

  std::ostringstream sys;
  sys << "You are agent " << obs.self + 1 << " in a team of " << k
      << " agents on a grid. Every agent must end up on a different goal. The team is judged by its makespan: "
         "the number of timesteps until the last agent reaches its goal, so the longest single path matters, "
         "not the sum.\n"
         "Each agent independently submits a complete ranking of all goals. Rankings are then combined by a fixed "
         "rule: agents are processed in index order and each receives its highest-ranked goal that is still free. "
         "In a conflict, the agent with the lowest index receives priority.\n"
         "Agents move one cell per timestep up, down, left or right along a shortest path; they cannot enter "
         "obstacles or leave the grid.\n"
         "Think step by step, then finish with exactly one final line of the form\n"
         "RANKING: <label> > <label> > ...\n"
         "listing every goal label exactly once, best first.";
  bundle.system_text = sys.str();

  std::ostringstream user;
  user << "## Scenario\n"
       << "Grid: " << s.n << " x " << s.n << " cells, coordinates (row,col) with (0,0) at the top-left.\n"
       << "Obstacles (" << s.obstacles.size() << "):";
  for (Position p : s.obstacles) user << ' ' << cell(p);
  user << "\nGoals:\n";
  for (int j = 0; j < k; ++j) {
    user << "  " << goal_label(j) << " at " << cell(s.goals[j]);
    if (std::find(obs.remaining_goals.begin(), obs.remaining_goals.end(), j) == obs.remaining_goals.end())
      user << " (already reached)";
    user << '\n';
  }
  user << "Agents (current positions):\n";
  for (int i = 0; i < k; ++i) {
    user << "  " << i + 1 << " at " << cell(obs.positions[i]);
    if (i == obs.self) user << " (you)";
    user << '\n';
  }
  user << "You are agent " << obs.self + 1 << ".\n";

  if (config.include_distances) {
    const DistanceMatrix d = obs.distances_or_compute();
    user << "\n## Shortest-path distances (steps, agent -> goal)\n";
    user << "agent";
    for (int j = 0; j < k; ++j) user << ' ' << goal_label(j);
    user << '\n';
    for (int i = 0; i < k; ++i) {
      user << i + 1;
      for (int j = 0; j < k; ++j) user << ' ' << (d(i, j).finite() ? std::to_string(d(i, j).value()) : "inf");
      user << '\n';
    }
  }

  if (!obs.others_provisional.empty()) {
    user << "\n## Provisional choices of other agents\n";
    for (const auto& [agent, ranking] : obs.others_provisional) {
      if (agent == obs.self) continue;
      user << "Agent " << agent + 1 << ": " << format_ranking(ranking.order) << '\n';
    }
  }

  user << "\n## Team-level Reasoning Checklist\n";
  const auto& steps = reasoning_checklist();
  for (std::size_t i = 0; i < steps.size(); ++i) user << i + 1 << ". " << steps[i] << '\n';

  user << "\n## Conflict rule\nIf several agents rank the same goal first, the agent with the lowest index "
          "receives priority; the others get their next free choice.\n";
  user << "\n## Output format\nEnd your answer with one line exactly like:\nRANKING: ";
  std::vector<GoalIndex> example(static_cast<size_t>(k));
  for (int j = 0; j < k; ++j) example[j] = j;
  user << format_ranking(example) << "\n(reorder the labels to your preference; include all " << k << " goals)\n";
  bundle.user_text = user.str();

  if (config.include_image) bundle.image_png = render_image(s, obs.positions);
  return bundle;
}

// ---------------------------------------------------------------------------

FixtureTransport FixtureTransport::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open fixture " + path.string());
  json doc;
  try {
    doc = json::parse(in);
    return FixtureTransport(doc.at("responses").get<std::map<std::string, std::string>>());
  } catch (const json::exception& e) {
    throw MalformedFile("fixture " + path.string() + ": " + e.what());
  }
}

void FixtureTransport::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write fixture " + path.string());
  out << json{{"responses", responses_}}.dump(2) << '\n';
}

std::string FixtureTransport::complete(const ChatRequest& request) {
  auto h = request.hash();
  auto it = responses_.find(h);
  if (it == responses_.end()) throw TransportFailure("fixture has no response for request " + h);
  return it->second;
}

std::string ScriptedTransport::complete(const ChatRequest& request) {
  requests_.push_back(request);
  if (responses_.empty()) throw TransportFailure("scripted transport has no responses");
  const auto& out = responses_[std::min<std::size_t>(calls_, responses_.size() - 1)];
  ++calls_;
  return out;
}

std::string RecordingTransport::complete(const ChatRequest& request) {
  std::string response = inner_.complete(request);
  std::lock_guard lock(mutex_);
  recorded_.add(request, response);
  return response;
}

RateLimiter::RateLimiter(double requests_per_minute)
    : interval_(requests_per_minute > 0 ? 60.0 / requests_per_minute : 0.0), next_(std::chrono::steady_clock::now()) {}

void RateLimiter::acquire() {
  if (interval_.count() <= 0) return;
  std::lock_guard lock(mutex_);
  auto now = std::chrono::steady_clock::now();
  if (next_ > now) {
    std::this_thread::sleep_until(next_);
    now = next_;
  }
  next_ = now + std::chrono::duration_cast<std::chrono::steady_clock::duration>(interval_);
}

LlmAgent::LlmAgent(LLMConfig config, std::shared_ptr<ChatTransport> transport, std::shared_ptr<RateLimiter> limiter)
    : config_(std::move(config)), transport_(std::move(transport)), limiter_(std::move(limiter)) {
  config_.check();
  if (!transport_) throw ConfigError("llm agent needs a transport");
}

std::string LlmAgent::send(const ChatRequest& request) {
  for (int attempt = 0;; ++attempt) {
    if (limiter_) limiter_->acquire();
    try {
      std::string text = transport_->complete(request);
      transcript_.push_back({request.to_json(), text});
      return text;
    } catch (const TransportFailure&) {
      if (attempt >= config_.retries) throw;
    }
  }
}

Decision LlmAgent::decide(const Observation& observation) {
  PromptBundle bundle = build_prompt(observation, config_);
  ChatRequest request{config_.model, config_.temperature, {}};
  request.messages.push_back({"system", bundle.system_text, {}});
  request.messages.push_back({"user", bundle.user_text, bundle.image_png});

  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    std::string text = send(request);
    try {
      return {parse_ranking(text, observation.self, observation.k()), attempt, false};
    } catch (const MalformedResponse& e) {
      request.messages.push_back({"assistant", text, {}});
      request.messages.push_back({"user",
                                  std::string("Your answer could not be used: ") + e.what() +
                                      ". Reply again and end with exactly one line: RANKING: <label> > <label> > ... "
                                      "covering every goal once.",
                                  {}});
    }
  }
  return {distance_ranker(observation), config_.retries, true};
}

}  // namespace goalassign
