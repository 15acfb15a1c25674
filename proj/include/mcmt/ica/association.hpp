#pragma once

#include <vector>

#include <Eigen/Core>

#include "mcmt/ica/config.hpp"
#include "mcmt/ica/distance.hpp"

namespace mcmt::ica {

// Columns with the k smallest entries of row i (ties: lower column first), nearest first.
std::vector<std::vector<int>> nearest_columns(const Eigen::MatrixXd& d, int k);
// Rows with the k smallest entries of column j.
std::vector<std::vector<int>> nearest_rows(const Eigen::MatrixXd& d, int k);

// R(i, k): members of row i's k nearest columns whose own k nearest rows include i.
// Each set keeps the nearest-first order of N(i, k).
std::vector<std::vector<int>> k_reciprocal_sets(const Eigen::MatrixXd& d, int k);

// One cross-camera match within a link, as indices into the pool's exiting/entering lists.
struct LinkMatch {
  int exiting = 0;
  int entering = 0;
  int votes = 0;
  double score = 0.0;  // mean distance backing the match
  friend bool operator==(const LinkMatch&, const LinkMatch&) = default;
};

// Box-level votes: entry (i, j) is the number of row boxes of exiting tracklet i voting for
// entering tracklet j; `distance` holds the summed distance of those votes.
struct VoteTable {
  Eigen::MatrixXi votes;
  Eigen::MatrixXd distance;
};

VoteTable reciprocal_votes(const DistanceMatrix& d, int n_exiting, int n_entering, int k);
VoteTable assignment_votes(const DistanceMatrix& d, int n_exiting, int n_entering);

// Each exiting tracklet claims the entering tracklet with the most votes (>= min_votes);
// conflicts are settled greedily by vote count, then by mean distance.
std::vector<LinkMatch> resolve_votes(const VoteTable& table, int min_votes);

// Box-grained k-reciprocal voting association on a refined box matrix.
std::vector<LinkMatch> associate_box_grained(const DistanceMatrix& d, const PoolPair& pool,
                                             const IcaConfig& cfg);

// Minimum-cost one-to-one assignment on a tracklet-grained matrix; pairs above
// `threshold` are dropped.
std::vector<LinkMatch> associate_hungarian(const DistanceMatrix& d, double threshold);

// Full per-link matching according to cfg.granularity / cfg.matcher and refinement flags.
std::vector<LinkMatch> match_link(const PoolPair& pool, const IcaConfig& cfg);

}  // namespace mcmt::ica
