#include "goalassign/world.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "goalassign/pathing.hpp"
#include "goalassign/random.hpp"

namespace goalassign {

using nlohmann::json;

std::string goal_label(GoalIndex j) {
  std::string out;
  for (int v = j + 1; v > 0; v = (v - 1) / 26) out.insert(out.begin(), static_cast<char>('A' + (v - 1) % 26));
  return out;
}

GoalIndex goal_index(std::string_view label) {
  if (label.empty() || label.size() > 4) return -1;
  int v = 0;
  for (char c : label) {
    if (c < 'A' || c > 'Z') return -1;
    v = v * 26 + (c - 'A' + 1);
  }
  return v - 1;
}

bool Scenario::is_obstacle(Position p) const { return std::binary_search(obstacles.begin(), obstacles.end(), p); }

bool ValidationReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; });
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kCountMismatch: return "count mismatch";
    case ViolationKind::kOutOfBounds: return "out of bounds";
    case ViolationKind::kOverlap: return "overlap";
    case ViolationKind::kDuplicate: return "duplicate";
    case ViolationKind::kBadSize: return "bad size";
  }
  return "unknown";
}

namespace {

std::string cell_text(Position p) { return "(" + std::to_string(p.row) + "," + std::to_string(p.col) + ")"; }

}  // namespace

std::string ValidationReport::describe() const {
  if (ok()) return "ok";
  std::ostringstream out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    const auto& v = violations[i];
    if (i) out << "; ";
    out << to_string(v.kind) << ": " << v.detail;
    for (Position p : v.cells) out << ' ' << cell_text(p);
  }
  return out.str();
}

ValidationReport validate(const Scenario& s) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, std::string detail, std::vector<Position> cells = {}) {
    report.violations.push_back({kind, std::move(detail), std::move(cells)});
  };

  if (s.n < 1) add(ViolationKind::kBadSize, "grid side must be at least 1");
  if (s.k < 1) add(ViolationKind::kCountMismatch, "k must be at least 1");
  if (static_cast<int>(s.agents.size()) != s.k || static_cast<int>(s.goals.size()) != s.k) {
    add(ViolationKind::kCountMismatch, "expected " + std::to_string(s.k) + " agents and goals, got " +
                                           std::to_string(s.agents.size()) + " and " + std::to_string(s.goals.size()));
  }

  struct Group {
    const char* name;
    const std::vector<Position>* cells;
  };
  const Group groups[] = {{"agent", &s.agents}, {"goal", &s.goals}, {"obstacle", &s.obstacles}};

  std::vector<Position> outside;
  for (const auto& g : groups)
    for (Position p : *g.cells)
      if (!s.in_bounds(p)) outside.push_back(p);
  if (!outside.empty()) add(ViolationKind::kOutOfBounds, "cells outside the grid", outside);

  std::map<Position, const char*> owner;
  for (const auto& g : groups) {
    std::set<Position> seen;
    std::vector<Position> dups;
    for (Position p : *g.cells) {
      if (!seen.insert(p).second) {
        dups.push_back(p);
        continue;
      }
      auto [it, inserted] = owner.emplace(p, g.name);
      if (!inserted) add(ViolationKind::kOverlap, std::string(it->second) + " and " + g.name + " share a cell", {p});
    }
    if (!dups.empty()) add(ViolationKind::kDuplicate, std::string("repeated ") + g.name + " cells", dups);
  }
  return report;
}

void ScenarioDistribution::check() const {
  if (n < 1) throw ConfigError("distribution: n must be at least 1");
  if (k_range.min < 1 || k_range.max < k_range.min) throw ConfigError("distribution: bad k range");
  if (obstacle_range.min < 0 || obstacle_range.max < obstacle_range.min)
    throw ConfigError("distribution: bad obstacle range");
  if (static_cast<long>(n) * n < 2L * k_range.max + obstacle_range.max)
    throw ConfigError("distribution: grid too small for 2*k_max + obstacles_max cells");
}

namespace {

Scenario draw(const ScenarioDistribution& dist, std::mt19937_64& rng) {
  Scenario s;
  s.n = dist.n;
  s.k = uniform_int(rng, dist.k_range.min, dist.k_range.max);
  const int obstacle_count = uniform_int(rng, dist.obstacle_range.min, dist.obstacle_range.max);

  // Partial Fisher-Yates: the first `needed` cells are a uniform sample
  // without replacement.
  const int cells = dist.n * dist.n;
  const int needed = obstacle_count + 2 * s.k;
  std::vector<int> pool(static_cast<size_t>(cells));
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < needed; ++i) std::swap(pool[i], pool[uniform_int(rng, i, cells - 1)]);

  int next = 0;
  for (int i = 0; i < obstacle_count; ++i) s.obstacles.push_back(s.cell_at(pool[next++]));
  for (int i = 0; i < s.k; ++i) s.agents.push_back(s.cell_at(pool[next++]));
  for (int i = 0; i < s.k; ++i) s.goals.push_back(s.cell_at(pool[next++]));
  std::sort(s.obstacles.begin(), s.obstacles.end());
  return s;
}

}  // namespace

Scenario generate(const ScenarioDistribution& dist, std::uint64_t seed, int max_attempts) {
  dist.check();
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Scenario s = draw(dist, rng);
    s.seed = seed;
    if (!dist.require_full_reachability || distance_matrix(s).all_finite()) return s;
  }
  throw RetryLimitExhausted("generate: no fully reachable scenario after " + std::to_string(max_attempts) +
                            " attempts");
}

namespace {

json cells_json(const std::vector<Position>& cells) {
  json out = json::array();
  for (Position p : cells) out.push_back({p.row, p.col});
  return out;
}

std::vector<Position> cells_from(const json& doc, const char* key) {
  const json& arr = doc.at(key);
  if (!arr.is_array()) throw MalformedFile(std::string("scenario: '") + key + "' must be an array");
  std::vector<Position> out;
  for (const json& cell : arr) {
    if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number_integer() || !cell[1].is_number_integer())
      throw MalformedFile(std::string("scenario: '") + key + "' entries must be [row,col] integer pairs");
    out.push_back({cell[0].get<int>(), cell[1].get<int>()});
  }
  return out;
}

}  // namespace

std::string to_text(const Scenario& s) {
  std::vector<Position> obstacles = s.obstacles;
  std::sort(obstacles.begin(), obstacles.end());
  // Compact [row,col] pairs, one field per line.
  std::ostringstream out;
  out << "{\n"
      << "  \"n\": " << s.n << ",\n"
      << "  \"k\": " << s.k << ",\n"
      << "  \"agents\": " << cells_json(s.agents).dump() << ",\n"
      << "  \"goals\": " << cells_json(s.goals).dump() << ",\n"
      << "  \"obstacles\": " << cells_json(obstacles).dump() << ",\n"
      << "  \"seed\": " << s.seed << "\n"
      << "}\n";
  return out.str();
}

Scenario from_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw MalformedFile(std::string("scenario: not valid structured text: ") + e.what());
  }
  if (!doc.is_object()) throw MalformedFile("scenario: top level must be an object");
  Scenario s;
  try {
    s.n = doc.at("n").get<int>();
    s.k = doc.at("k").get<int>();
    s.agents = cells_from(doc, "agents");
    s.goals = cells_from(doc, "goals");
    s.obstacles = cells_from(doc, "obstacles");
    s.seed = doc.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw MalformedFile(std::string("scenario: ") + e.what());
  }
  std::sort(s.obstacles.begin(), s.obstacles.end());
  if (auto report = validate(s); !report.ok()) throw MalformedFile("scenario: invalid: " + report.describe());
  return s;
}

void save(const Scenario& scenario, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << to_text(scenario);
  if (!out) throw IoError("write failed: " + path.string());
}

Scenario load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str());
}

}  // namespace goalassign
