#include "mcmt/ica/config.hpp"

#include "mcmt/core/errors.hpp"

namespace mcmt::ica {

void IcaConfig::validate() const {
  if (k_mean < 1) throw ConfigError("k_mean must be >= 1");
  if (k_reciprocal < 1) throw ConfigError("k_reciprocal must be >= 1");
  if (!(r_thre >= 0.0 && r_thre <= 1.0)) throw ConfigError("r_thre must be in [0,1]");
  if (alpha_t < 0.0 || alpha_o < 0.0) throw ConfigError("alpha_t and alpha_o must be >= 0");
  if (alpha_penalty < 1.0) throw ConfigError("alpha_penalty must be >= 1");
  if (rerank_k1 < 1 || rerank_k2 < 1) throw ConfigError("re-ranking k1/k2 must be >= 1");
  if (!(rerank_lambda >= 0.0 && rerank_lambda <= 1.0))
    throw ConfigError("rerank_lambda must be in [0,1]");
  if (min_votes < 1) throw ConfigError("min_votes must be >= 1");
}

}  // namespace mcmt::ica
