#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "goalassign/errors.hpp"

namespace goalassign {

struct Position {
  int row = 0;
  int col = 0;

  friend constexpr bool operator==(const Position&, const Position&) = default;
  friend constexpr auto operator<=>(const Position&, const Position&) = default;
};

using AgentIndex = int;  // 0-based; agent i is displayed as i+1
using GoalIndex = int;   // 0-based; goal j is displayed as goal_label(j)

// Bijective base-26 label: 0 -> "A", 25 -> "Z", 26 -> "AA".
std::string goal_label(GoalIndex j);
// Inverse of goal_label; returns -1 for anything that is not an upper-case label.
GoalIndex goal_index(std::string_view label);

// A static, fully observable N x N world. Immutable once built.
struct Scenario {
  int n = 0;
  int k = 0;
  std::vector<Position> agents;
  std::vector<Position> goals;
  std::vector<Position> obstacles;  // kept sorted
  std::uint64_t seed = 0;

  bool in_bounds(Position p) const { return p.row >= 0 && p.col >= 0 && p.row < n && p.col < n; }
  bool is_obstacle(Position p) const;
  int cell_index(Position p) const { return p.row * n + p.col; }
  Position cell_at(int index) const { return {index / n, index % n}; }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct IntRange {
  int min = 0;
  int max = 0;
};

struct ScenarioDistribution {
  int n = 20;
  IntRange k_range{2, 6};
  IntRange obstacle_range{15, 30};
  bool require_full_reachability = true;

  // Throws ConfigError if the distribution cannot always be placed.
  void check() const;
};

// Default experiment grid: 20x20, 2..6 agents, 15..30 obstacles.
inline ScenarioDistribution default_distribution() { return {}; }

enum class ViolationKind { kCountMismatch, kOutOfBounds, kOverlap, kDuplicate, kBadSize };

struct Violation {
  ViolationKind kind;
  std::string detail;
  std::vector<Position> cells;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind kind) const;
  std::string describe() const;
};

std::string to_string(ViolationKind kind);

ValidationReport validate(const Scenario& scenario);

inline constexpr int kMaxGenerateAttempts = 10'000;

// Pure function of (dist, seed). Throws RetryLimitExhausted after
// max_attempts draws that fail the reachability requirement.
Scenario generate(const ScenarioDistribution& dist, std::uint64_t seed, int max_attempts = kMaxGenerateAttempts);

std::string to_text(const Scenario& scenario);
Scenario from_text(std::string_view text);

void save(const Scenario& scenario, const std::filesystem::path& path);
Scenario load(const std::filesystem::path& path);

}  // namespace goalassign
