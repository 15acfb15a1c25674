#include "mcmt/assign/hungarian.hpp"

#include <algorithm>
#include <cmath>

namespace mcmt {

namespace {

// Rows <= cols. Returns col index per row.
std::vector<int> hungarian_rows(const Eigen::MatrixXd& a) {
  const int n = int(a.rows());
  const int m = int(a.cols());
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based potentials; p[j] is the row matched to column j.
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0), minv(m + 1);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j)
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace

std::vector<Assignment> solve_assignment(const Eigen::MatrixXd& cost) {
  std::vector<Assignment> out;
  if (cost.rows() == 0 || cost.cols() == 0) return out;

  // Replace forbidden entries by a finite value larger than any feasible total.
  double max_finite = 0.0;
  for (Eigen::Index i = 0; i < cost.size(); ++i) {
    const double c = cost.data()[i];
    if (std::isfinite(c)) max_finite = std::max(max_finite, std::abs(c));
  }
  const double big = (max_finite + 1.0) * double(std::max(cost.rows(), cost.cols()) + 1) * 2.0;
  Eigen::MatrixXd work = cost.unaryExpr([big](double c) { return std::isfinite(c) ? c : big; });

  const bool transpose = work.rows() > work.cols();
  if (transpose) work.transposeInPlace();
  const auto match = hungarian_rows(work);
  for (int r = 0; r < int(match.size()); ++r) {
    if (match[r] < 0) continue;
    const int row = transpose ? match[r] : r;
    const int col = transpose ? r : match[r];
    const double c = cost(row, col);
    if (!std::isfinite(c)) continue;
    out.push_back({row, col, c});
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.row < y.row; });
  return out;
}

std::vector<Assignment> solve_assignment(const Eigen::MatrixXd& cost, double max_cost) {
  auto all = solve_assignment(cost);
  std::erase_if(all, [max_cost](const Assignment& a) { return a.cost > max_cost; });
  return all;
}

}  // namespace mcmt
