#include "mcmt/core/feature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mcmt/core/errors.hpp"

namespace mcmt {

double cosine_distance(const Feature& a, const Feature& b) {
  if (a.dim() != b.dim())
    throw UsageError("feature dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                     std::to_string(b.dim()));
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double x = a[i], y = b[i];
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  if (na == 0.0 || nb == 0.0) throw UsageError("cosine distance of a zero feature");
  const double c = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(1.0 - c, 0.0, 2.0);
}

double unit_cosine_distance(const Feature& a, const Feature& b) {
  double dot = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) dot += double(a[i]) * double(b[i]);
  return std::clamp(1.0 - dot, 0.0, 2.0);
}

Feature mean_feature(std::span<const Feature> features) {
  if (features.empty()) throw UsageError("mean of no features");
  std::vector<double> acc(features.front().dim(), 0.0);
  for (const auto& f : features) {
    if (f.dim() != acc.size()) throw UsageError("feature dimension mismatch");
    const auto nf = f.normalized();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += nf[i];
  }
  std::vector<float> out(acc.begin(), acc.end());
  return Feature(std::move(out)).normalized();
}

Feature blend(const Feature& a, double wa, const Feature& b, double wb) {
  if (a.dim() != b.dim()) throw UsageError("feature dimension mismatch");
  std::vector<float> out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = float(wa * a[i] + wb * b[i]);
  return Feature(std::move(out));
}

}  // namespace mcmt
