#include "mcmt/ica/rerank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

namespace mcmt::ica {

namespace {

using SparseRow = std::vector<std::pair<int, double>>;  // (column, weight), sorted by column

// The `count` nearest items of every row of a square matrix, nearest first, ties by index.
std::vector<std::vector<int>> ranked_prefix(const Eigen::MatrixXd& d, int count) {
  const int n = int(d.rows());
  const int k = std::min(count, n);
  std::vector<std::vector<int>> out(n);
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) {
    std::iota(idx.begin(), idx.end(), 0);
    const auto less = [&](int a, int b) {
      return d(i, a) < d(i, b) || (d(i, a) == d(i, b) && a < b);
    };
    std::partial_sort(idx.begin(), idx.begin() + k, idx.end(), less);
    out[i].assign(idx.begin(), idx.begin() + k);
  }
  return out;
}

// Members of `rank[i][0..len)` whose own first `len` neighbours contain i.
std::vector<int> reciprocal(const std::vector<std::vector<int>>& rank, int i, int len) {
  std::vector<int> out;
  const auto& fwd = rank[i];
  const int lf = std::min<int>(len, int(fwd.size()));
  for (int a = 0; a < lf; ++a) {
    const auto& back = rank[fwd[a]];
    const int lb = std::min<int>(len, int(back.size()));
    if (std::find(back.begin(), back.begin() + lb, i) != back.begin() + lb) out.push_back(fwd[a]);
  }
  return out;
}

}  // namespace

Eigen::MatrixXd rerank(const Eigen::MatrixXd& qg, const Eigen::MatrixXd& qq,
                       const Eigen::MatrixXd& gg, const RerankParams& p) {
  const int nq = int(qg.rows());
  const int ng = int(qg.cols());
  const int n = nq + ng;
  if (nq == 0 || ng == 0) return qg;

  Eigen::MatrixXd dist(n, n);
  dist.topLeftCorner(nq, nq) = qq;
  dist.topRightCorner(nq, ng) = qg;
  dist.bottomLeftCorner(ng, nq) = qg.transpose();
  dist.bottomRightCorner(ng, ng) = gg;
  for (int i = 0; i < n; ++i) {
    const double m = dist.row(i).maxCoeff();
    if (m > 0.0) dist.row(i) /= m;
  }

  const int k1 = std::max(p.k1, 1);
  // half-to-even, as in the reference formulation (2.5 -> 2)
  const int half = int(std::nearbyint(k1 / 2.0));
  const auto rank = ranked_prefix(dist, std::max(k1 + 1, p.k2));

  std::vector<SparseRow> v(n);
  for (int i = 0; i < n; ++i) {
    const auto base = reciprocal(rank, i, k1 + 1);
    std::vector<int> expanded = base;
    for (int cand : base) {
      const auto cset = reciprocal(rank, cand, half + 1);
      std::size_t shared = 0;
      for (int c : cset)
        if (std::find(base.begin(), base.end(), c) != base.end()) ++shared;
      if (double(shared) > 2.0 / 3.0 * double(cset.size()))
        expanded.insert(expanded.end(), cset.begin(), cset.end());
    }
    std::sort(expanded.begin(), expanded.end());
    expanded.erase(std::unique(expanded.begin(), expanded.end()), expanded.end());
    double total = 0.0;
    for (int j : expanded) total += std::exp(-dist(i, j));
    for (int j : expanded) v[i].emplace_back(j, std::exp(-dist(i, j)) / total);
  }

  // local query expansion over the k2 nearest items
  if (p.k2 > 1) {
    std::vector<SparseRow> qe(n);
    std::vector<double> acc(n, 0.0);
    std::vector<int> touched;
    for (int i = 0; i < n; ++i) {
      const int len = std::min<int>(p.k2, int(rank[i].size()));
      touched.clear();
      for (int a = 0; a < len; ++a)
        for (const auto& [j, w] : v[rank[i][a]]) {
          if (acc[j] == 0.0) touched.push_back(j);
          acc[j] += w;
        }
      std::sort(touched.begin(), touched.end());
      for (int j : touched) {
        qe[i].emplace_back(j, acc[j] / len);
        acc[j] = 0.0;
      }
    }
    v = std::move(qe);
  }

  // inverted index: item -> rows with non-zero weight on it
  std::vector<std::vector<std::pair<int, double>>> inv(n);
  for (int i = 0; i < n; ++i)
    for (const auto& [j, w] : v[i]) inv[j].emplace_back(i, w);

  Eigen::MatrixXd out(nq, ng);
  std::vector<double> shared(n);
  for (int i = 0; i < nq; ++i) {
    std::fill(shared.begin(), shared.end(), 0.0);
    for (const auto& [j, w] : v[i])
      for (const auto& [r, wr] : inv[j]) shared[r] += std::min(w, wr);
    for (int g = 0; g < ng; ++g) {
      const double s = shared[nq + g];
      const double jaccard = 1.0 - s / (2.0 - s);
      out(i, g) = p.lambda * qg(i, g) + (1.0 - p.lambda) * jaccard;
    }
  }
  return out;
}

}  // namespace mcmt::ica
