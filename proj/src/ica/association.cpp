#include "mcmt/ica/association.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "mcmt/assign/hungarian.hpp"
#include "mcmt/ica/rerank.hpp"

namespace mcmt::ica {

namespace {

template <class Get>
std::vector<int> k_smallest(int count, int k, Get value) {
  std::vector<int> idx(count);
  std::iota(idx.begin(), idx.end(), 0);
  const int n = std::min(k, count);
  std::partial_sort(idx.begin(), idx.begin() + n, idx.end(), [&](int a, int b) {
    const double va = value(a), vb = value(b);
    return va < vb || (va == vb && a < b);
  });
  idx.resize(n);
  return idx;
}

}  // namespace

std::vector<std::vector<int>> nearest_columns(const Eigen::MatrixXd& d, int k) {
  std::vector<std::vector<int>> out(d.rows());
  for (Eigen::Index i = 0; i < d.rows(); ++i)
    out[i] = k_smallest(int(d.cols()), k, [&](int j) { return d(i, j); });
  return out;
}

std::vector<std::vector<int>> nearest_rows(const Eigen::MatrixXd& d, int k) {
  std::vector<std::vector<int>> out(d.cols());
  for (Eigen::Index j = 0; j < d.cols(); ++j)
    out[j] = k_smallest(int(d.rows()), k, [&](int i) { return d(i, j); });
  return out;
}

std::vector<std::vector<int>> k_reciprocal_sets(const Eigen::MatrixXd& d, int k) {
  const auto fwd = nearest_columns(d, k);
  const auto back = nearest_rows(d, k);
  std::vector<std::vector<int>> out(fwd.size());
  for (std::size_t i = 0; i < fwd.size(); ++i)
    for (int j : fwd[i]) {
      const auto& b = back[j];
      if (std::find(b.begin(), b.end(), int(i)) != b.end()) out[i].push_back(j);
    }
  return out;
}

VoteTable reciprocal_votes(const DistanceMatrix& d, int n_exiting, int n_entering, int k) {
  VoteTable t{Eigen::MatrixXi::Zero(n_exiting, n_entering),
              Eigen::MatrixXd::Zero(n_exiting, n_entering)};
  const auto sets = k_reciprocal_sets(d.values, k);
  std::vector<int> count(n_entering);
  std::vector<double> dist(n_entering);
  for (std::size_t r = 0; r < sets.size(); ++r) {
    if (sets[r].empty()) continue;
    std::fill(count.begin(), count.end(), 0);
    std::fill(dist.begin(), dist.end(), 0.0);
    for (int c : sets[r]) {
      const int owner = d.col_map[c].tracklet;
      ++count[owner];
      dist[owner] += d.values(Eigen::Index(r), c);
    }
    int best = -1;
    for (int j = 0; j < n_entering; ++j) {
      if (count[j] == 0) continue;
      if (best < 0 || count[j] > count[best] ||
          (count[j] == count[best] && dist[j] / count[j] < dist[best] / count[best]))
        best = j;
    }
    const int owner_row = d.row_map[r].tracklet;
    t.votes(owner_row, best) += 1;
    t.distance(owner_row, best) += dist[best] / count[best];
  }
  return t;
}

VoteTable assignment_votes(const DistanceMatrix& d, int n_exiting, int n_entering) {
  VoteTable t{Eigen::MatrixXi::Zero(n_exiting, n_entering),
              Eigen::MatrixXd::Zero(n_exiting, n_entering)};
  for (const auto& a : solve_assignment(d.values)) {
    const int i = d.row_map[a.row].tracklet;
    const int j = d.col_map[a.col].tracklet;
    t.votes(i, j) += 1;
    t.distance(i, j) += a.cost;
  }
  return t;
}

std::vector<LinkMatch> resolve_votes(const VoteTable& table, int min_votes) {
  std::vector<LinkMatch> claims;
  for (Eigen::Index i = 0; i < table.votes.rows(); ++i) {
    int best = -1;
    for (Eigen::Index j = 0; j < table.votes.cols(); ++j) {
      const int v = table.votes(i, j);
      if (v == 0) continue;
      if (best < 0 || v > table.votes(i, best) ||
          (v == table.votes(i, best) &&
           table.distance(i, j) / v < table.distance(i, best) / table.votes(i, best)))
        best = int(j);
    }
    if (best < 0 || table.votes(i, best) < min_votes) continue;
    const int v = table.votes(i, best);
    claims.push_back({int(i), best, v, table.distance(i, best) / v});
  }
  std::sort(claims.begin(), claims.end(), [](const LinkMatch& a, const LinkMatch& b) {
    return std::tuple(-a.votes, a.score, a.exiting) < std::tuple(-b.votes, b.score, b.exiting);
  });
  std::vector<char> taken(std::size_t(table.votes.cols()), 0);
  std::vector<LinkMatch> out;
  for (const auto& c : claims) {
    if (taken[c.entering]) continue;
    taken[c.entering] = 1;
    out.push_back(c);
  }
  std::sort(out.begin(), out.end(),
            [](const LinkMatch& a, const LinkMatch& b) { return a.exiting < b.exiting; });
  return out;
}

std::vector<LinkMatch> associate_box_grained(const DistanceMatrix& d, const PoolPair& pool,
                                             const IcaConfig& cfg) {
  const auto table =
      reciprocal_votes(d, int(pool.exiting.size()), int(pool.entering.size()), cfg.k_reciprocal);
  return resolve_votes(table, cfg.min_votes);
}

std::vector<LinkMatch> associate_hungarian(const DistanceMatrix& d, double threshold) {
  std::vector<LinkMatch> out;
  for (const auto& a : solve_assignment(d.values, threshold))
    out.push_back({d.row_map[a.row].tracklet, d.col_map[a.col].tracklet, 1, a.cost});
  return out;
}

std::vector<LinkMatch> match_link(const PoolPair& pool, const IcaConfig& cfg) {
  if (pool.exiting.empty() || pool.entering.empty()) return {};
  const int n = int(pool.exiting.size());
  const int m = int(pool.entering.size());

  if (cfg.granularity == Granularity::tracklet) {
    const auto d = build_tracklet_matrix(pool, cfg);
    if (cfg.matcher == Matcher::hungarian) return associate_hungarian(d, cfg.hungarian_threshold);
    // one row per tracklet: a single reciprocal vote decides
    return resolve_votes(reciprocal_votes(d, n, m, cfg.k_reciprocal), 1);
  }

  auto d = build_box_matrix(pool);
  if (cfg.use_rerank)
    d.values = rerank(d.values, self_distances(pool.exiting), self_distances(pool.entering),
                      {cfg.rerank_k1, cfg.rerank_k2, cfg.rerank_lambda});
  if (cfg.use_time_refine) d = refine_time(std::move(d), pool, cfg);
  if (cfg.use_occlusion_refine) d = refine_occlusion(std::move(d), pool, cfg);

  if (cfg.matcher == Matcher::k_reciprocal) return associate_box_grained(d, pool, cfg);
  // box-level assignment; every assigned box pair votes
  return resolve_votes(assignment_votes(d, n, m), cfg.min_votes);
}

}  // namespace mcmt::ica
