#pragma once

#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace mcmt {

inline constexpr double kForbidden = std::numeric_limits<double>::infinity();

struct Assignment {
  int row = 0;
  int col = 0;
  double cost = 0.0;
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

// Minimum-cost one-to-one assignment on a rectangular matrix (Hungarian method with
// potentials, O(n^2 m)). Entries equal to kForbidden are never returned; every result is
// sorted by row. Deterministic for identical input.
std::vector<Assignment> solve_assignment(const Eigen::MatrixXd& cost);

// As above, but pairs whose cost exceeds `max_cost` are dropped after solving.
std::vector<Assignment> solve_assignment(const Eigen::MatrixXd& cost, double max_cost);

}  // namespace mcmt
