#pragma once

#include <optional>
#include <span>
#include <vector>

#include "goalassign/world.hpp"

namespace goalassign {

// A step count that may be infinite (unreachable). There is deliberately no
// arithmetic on Distance; callers must unwrap finite values explicitly.
class Distance {
 public:
  static constexpr Distance infinite() { return Distance(); }
  static constexpr Distance steps(int n) { return Distance(n); }

  constexpr bool finite() const { return steps_ >= 0; }
  // Precondition: finite().
  constexpr int value() const { return steps_; }

  friend constexpr bool operator==(Distance, Distance) = default;
  // Infinite compares greater than every finite distance.
  friend constexpr auto operator<=>(Distance a, Distance b) {
    if (a.finite() != b.finite()) return a.finite() ? std::strong_ordering::less : std::strong_ordering::greater;
    return a.steps_ <=> b.steps_;
  }

 private:
  constexpr Distance() = default;
  constexpr explicit Distance(int n) : steps_(n) {}
  int steps_ = -1;
};

// Shortest step counts from one source to every cell of the grid. Cells that
// are obstacles or unreachable have no entry.
class DistanceField {
 public:
  DistanceField(int n, Position source) : n_(n), source_(source), steps_(static_cast<size_t>(n) * n, -1) {}

  Position source() const { return source_; }
  bool contains(Position p) const;
  std::optional<int> at(Position p) const;
  Distance distance(Position p) const;
  std::size_t size() const;  // number of reachable cells, source included

  void set(Position p, int steps) { steps_[static_cast<size_t>(p.row) * n_ + p.col] = steps; }

 private:
  int n_;
  Position source_;
  std::vector<int> steps_;
};

// k x k agent-to-goal table.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(int k) : k_(k), entries_(static_cast<size_t>(k) * k, Distance::infinite()) {}
  // Convenience for fixtures: negative entries mean unreachable.
  static DistanceMatrix from_rows(const std::vector<std::vector<int>>& rows);

  int size() const { return k_; }
  Distance operator()(AgentIndex i, GoalIndex j) const { return entries_[static_cast<size_t>(i) * k_ + j]; }
  Distance& operator()(AgentIndex i, GoalIndex j) { return entries_[static_cast<size_t>(i) * k_ + j]; }

  bool all_finite() const;

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  int k_ = 0;
  std::vector<Distance> entries_;
};

struct Path {
  std::vector<Position> cells;

  int steps() const { return static_cast<int>(cells.size()) - 1; }
};

// Fixed neighbour expansion order: up, down, left, right.
inline constexpr Position kMoves[4] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};

// Extra cells that block movement in addition to the scenario's obstacles.
using Blocked = std::span<const Position>;

DistanceField bfs_distances(const Scenario& scenario, Position source, Blocked extra_blocked = {});

DistanceMatrix distance_matrix(const Scenario& scenario);
// Same table for an arbitrary set of agent positions (used after agents move).
DistanceMatrix distance_matrix(const Scenario& scenario, std::span<const Position> agent_positions);

Path shortest_path(const Scenario& scenario, Position source, Position target, Blocked extra_blocked = {});

}  // namespace goalassign
