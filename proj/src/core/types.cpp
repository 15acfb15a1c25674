#include "mcmt/core/types.hpp"

#include <cmath>
#include <string>

#include "mcmt/core/errors.hpp"
#include "mcmt/core/geometry.hpp"

namespace mcmt {

bool Rect::valid() const {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(w) && std::isfinite(h) && w > 0.0 &&
         h > 0.0;
}

double Feature::norm() const {
  double s = 0.0;
  for (float v : values_) s += double(v) * double(v);
  return std::sqrt(s);
}

Feature Feature::normalized() const {
  const double n = norm();
  if (n == 0.0) throw UsageError("cannot normalize a zero feature");
  std::vector<float> out(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) out[i] = float(double(values_[i]) / n);
  return Feature(std::move(out));
}

bool Feature::finite() const {
  for (float v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

const Zone* CameraInfo::find_zone(int zone_id) const {
  for (const auto& z : zones)
    if (z.zone_id == zone_id) return &z;
  return nullptr;
}

const CameraInfo* CameraTopology::find_camera(CameraId id) const {
  for (const auto& c : cameras)
    if (c.id == id) return &c;
  return nullptr;
}

void CameraTopology::validate() const {
  for (std::size_t i = 0; i < cameras.size(); ++i) {
    for (std::size_t j = i + 1; j < cameras.size(); ++j)
      if (cameras[i].id == cameras[j].id)
        throw ConfigError("duplicate camera id " + std::to_string(cameras[i].id));
    for (const auto& z : cameras[i].zones)
      if (!polygon_is_simple(z.polygon))
        throw ConfigError("zone " + std::to_string(z.zone_id) + " of camera " +
                          std::to_string(cameras[i].id) + " is not a simple polygon");
  }
  for (const auto& l : links) {
    const auto* co = find_camera(l.cam_out);
    const auto* ci = find_camera(l.cam_in);
    if (!co || !ci) throw ConfigError("link references unknown camera");
    if (!co->find_zone(l.zone_out))
      throw ConfigError("link references unknown zone " + std::to_string(l.zone_out) +
                        " on camera " + std::to_string(l.cam_out));
    if (!ci->find_zone(l.zone_in))
      throw ConfigError("link references unknown zone " + std::to_string(l.zone_in) +
                        " on camera " + std::to_string(l.cam_in));
    if (!(l.t_low < l.t_upp)) throw ConfigError("link travel window needs t_low < t_upp");
    if (l.t_low < 0.0 || l.t_out_max < 0 || l.t_in_min < 0)
      throw ConfigError("link time thresholds must be non-negative");
  }
}

}  // namespace mcmt
