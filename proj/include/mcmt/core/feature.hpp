#pragma once

#include "mcmt/core/types.hpp"

namespace mcmt {

// 1 - cos(a, b). Throws UsageError on dimension mismatch or a zero vector.
double cosine_distance(const Feature& a, const Feature& b);

// Same as cosine_distance() but for features already known to be unit length.
double unit_cosine_distance(const Feature& a, const Feature& b);

// Element-wise mean, re-normalized to unit length. `features` must be non-empty.
Feature mean_feature(std::span<const Feature> features);

Feature blend(const Feature& a, double wa, const Feature& b, double wb);

}  // namespace mcmt
