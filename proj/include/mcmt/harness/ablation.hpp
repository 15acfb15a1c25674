#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcmt/ica/config.hpp"
#include "mcmt/scmt/config.hpp"

namespace mcmt::harness {

struct AblationRow {
  std::string name;
  std::vector<double> idf1;  // one value per seed
  std::vector<double> mota;
  std::vector<double> idsw;

  static double mean(const std::vector<double>& v);
  // Standard error of the mean; 0 for fewer than two values.
  static double standard_error(const std::vector<double>& v);
};

struct AblationTable {
  std::string title;
  std::string preset;
  std::vector<std::uint64_t> seeds;
  std::vector<AblationRow> rows;

  const AblationRow& row(const std::string& name) const;
  std::string to_text() const;
  std::string to_csv() const;
};

struct NamedTracker {
  std::string name;
  scmt::TrackerConfig config;
};
struct NamedIca {
  std::string name;
  ica::IcaConfig config;
};

// baseline, +SSA, +SSA+TRL, +SSA+TRL+BT
std::vector<NamedTracker> strategy_grid();
// {tracklet, box} x {hungarian, k_reciprocal}
std::vector<NamedIca> matching_grid();
// box-grained k-reciprocal with each k
std::vector<NamedIca> k_grid(const std::vector<int>& ks);

std::vector<std::uint64_t> seed_range(std::uint64_t first, int count);

// Single-camera metrics of each tracker configuration, per seed of `preset`.
AblationTable ablate_tracking(const std::string& preset, const std::vector<std::uint64_t>& seeds,
                              const std::vector<NamedTracker>& rows, int jobs = 1);
// Cross-camera metrics of each matching configuration (full tracker).
AblationTable ablate_matching(const std::string& preset, const std::vector<std::uint64_t>& seeds,
                              const std::vector<NamedIca>& rows, int jobs = 1);

}  // namespace mcmt::harness
