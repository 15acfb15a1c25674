#include "mcmt/ica/postprocess.hpp"

#include <algorithm>

#include "mcmt/assign/union_find.hpp"

namespace mcmt::ica {

GlobalAssignment postprocess(const std::vector<CrossPair>& pairs,
                             const std::vector<TrackletKey>& all_tracklets,
                             bool include_single_camera) {
  GlobalAssignment out;
  for (const auto& p : pairs)
    if (p.t_in > p.t_out) out.pairs.push_back(p);

  std::vector<TrackletKey> keys;
  for (const auto& p : out.pairs) {
    keys.push_back(p.exiting);
    keys.push_back(p.entering);
  }
  if (include_single_camera) keys.insert(keys.end(), all_tracklets.begin(), all_tracklets.end());
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  const auto index_of = [&](const TrackletKey& k) {
    return std::size_t(std::lower_bound(keys.begin(), keys.end(), k) - keys.begin());
  };
  UnionFind uf(keys.size());
  for (const auto& p : out.pairs) uf.unite(index_of(p.exiting), index_of(p.entering));

  // keys are sorted, so the first member seen of each component is its smallest key
  std::vector<int> component_id(keys.size(), 0);
  int next = 1;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const std::size_t root = uf.find(i);
    if (component_id[root] == 0) component_id[root] = next++;
    out.global_ids[keys[i]] = component_id[root];
  }
  return out;
}

}  // namespace mcmt::ica
