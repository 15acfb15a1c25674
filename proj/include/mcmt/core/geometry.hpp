#pragma once

#include <span>

#include "mcmt/core/types.hpp"

namespace mcmt {

double intersection_area(const Rect& a, const Rect& b);

// Intersection over union; 0 for disjoint boxes.
double iou(const Rect& a, const Rect& b);

// Largest fraction of `box` covered by any single co-temporal box in `others`.
// Boxes with the same frame and det_id as `box` are skipped so a full frame list can be
// passed without filtering out `box` itself.
double occlusion_rate(const DetBox& box, std::span<const DetBox> others);

// Closed point-in-polygon test (points on an edge or vertex are inside).
bool point_in_polygon(const Point& p, std::span<const Point> polygon);

bool box_in_zone(const DetBox& box, const Zone& zone);

// True when the polygon has >= 3 vertices and no two non-adjacent edges intersect.
bool polygon_is_simple(std::span<const Point> polygon);

}  // namespace mcmt
