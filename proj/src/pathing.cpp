#include "goalassign/pathing.hpp"

#include <algorithm>
#include <deque>

namespace goalassign {

bool DistanceField::contains(Position p) const { return at(p).has_value(); }

std::optional<int> DistanceField::at(Position p) const {
  if (p.row < 0 || p.col < 0 || p.row >= n_ || p.col >= n_) return std::nullopt;
  int v = steps_[static_cast<size_t>(p.row) * n_ + p.col];
  if (v < 0) return std::nullopt;
  return v;
}

Distance DistanceField::distance(Position p) const {
  auto v = at(p);
  return v ? Distance::steps(*v) : Distance::infinite();
}

std::size_t DistanceField::size() const {
  return static_cast<std::size_t>(std::count_if(steps_.begin(), steps_.end(), [](int v) { return v >= 0; }));
}

DistanceMatrix DistanceMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
  DistanceMatrix m(static_cast<int>(rows.size()));
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) {
      int v = rows[i].at(j);
      m(i, j) = v < 0 ? Distance::infinite() : Distance::steps(v);
    }
  return m;
}

bool DistanceMatrix::all_finite() const {
  return std::all_of(entries_.begin(), entries_.end(), [](Distance d) { return d.finite(); });
}

namespace {

// Obstacles plus any extra blocked cells, as a flat mask.
std::vector<char> blocked_mask(const Scenario& s, Blocked extra) {
  std::vector<char> mask(static_cast<size_t>(s.n) * s.n, 0);
  for (Position p : s.obstacles)
    if (s.in_bounds(p)) mask[s.cell_index(p)] = 1;
  for (Position p : extra)
    if (s.in_bounds(p)) mask[s.cell_index(p)] = 1;
  return mask;
}

// BFS recording parents; parent of the source is itself.
struct Search {
  std::vector<int> dist;
  std::vector<int> parent;
};

Search search(const Scenario& s, Position source, const std::vector<char>& mask) {
  const int cells = s.n * s.n;
  Search out{std::vector<int>(cells, -1), std::vector<int>(cells, -1)};
  const int src = s.cell_index(source);
  out.dist[src] = 0;
  out.parent[src] = src;
  std::deque<Position> frontier{source};
  while (!frontier.empty()) {
    Position p = frontier.front();
    frontier.pop_front();
    const int here = s.cell_index(p);
    for (Position d : kMoves) {
      Position q{p.row + d.row, p.col + d.col};
      if (!s.in_bounds(q)) continue;
      const int there = s.cell_index(q);
      if (mask[there] || out.dist[there] >= 0) continue;
      out.dist[there] = out.dist[here] + 1;
      out.parent[there] = here;
      frontier.push_back(q);
    }
  }
  return out;
}

void check_source(const Scenario& s, Position source, const std::vector<char>& mask) {
  if (!s.in_bounds(source)) throw InvalidSource("source is outside the grid");
  if (mask[s.cell_index(source)]) throw InvalidSource("source is blocked");
}

}  // namespace

DistanceField bfs_distances(const Scenario& scenario, Position source, Blocked extra_blocked) {
  auto mask = blocked_mask(scenario, extra_blocked);
  check_source(scenario, source, mask);
  Search result = search(scenario, source, mask);
  DistanceField field(scenario.n, source);
  for (int c = 0; c < scenario.n * scenario.n; ++c)
    if (result.dist[c] >= 0) field.set(scenario.cell_at(c), result.dist[c]);
  return field;
}

DistanceMatrix distance_matrix(const Scenario& scenario) { return distance_matrix(scenario, scenario.agents); }

DistanceMatrix distance_matrix(const Scenario& scenario, std::span<const Position> agent_positions) {
  DistanceMatrix m(scenario.k);
  for (int i = 0; i < scenario.k; ++i) {
    DistanceField field = bfs_distances(scenario, agent_positions[i]);
    for (int j = 0; j < scenario.k; ++j) m(i, j) = field.distance(scenario.goals[j]);
  }
  return m;
}

Path shortest_path(const Scenario& scenario, Position source, Position target, Blocked extra_blocked) {
  auto mask = blocked_mask(scenario, extra_blocked);
  check_source(scenario, source, mask);
  if (!scenario.in_bounds(target) || mask[scenario.cell_index(target)]) throw NoPath("target is outside or blocked");
  Search result = search(scenario, source, mask);
  int cell = scenario.cell_index(target);
  if (result.dist[cell] < 0) throw NoPath("target unreachable");
  Path path;
  path.cells.resize(static_cast<size_t>(result.dist[cell]) + 1);
  for (auto it = path.cells.rbegin(); it != path.cells.rend(); ++it) {
    *it = scenario.cell_at(cell);
    cell = result.parent[cell];
  }
  return path;
}

}  // namespace goalassign
