#pragma once

#include <span>

namespace viscom {

// Axis-aligned box in CSS pixels. Origin top-left, y grows downward.
struct Rect {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double right() const { return x + w; }
  double bottom() const { return y + h; }
  double area() const { return w * h; }
  double center_x() const { return x + w / 2.0; }
  double center_y() const { return y + h / 2.0; }
  bool empty() const { return w <= 0.0 || h <= 0.0; }

  friend bool operator==(const Rect&, const Rect&) = default;
};

// Intersection of two boxes; zero-size box at the clamped corner when disjoint.
Rect intersect(const Rect& a, const Rect& b);

// True when `inner` lies within `outer` allowing `tolerance` px of overhang.
bool contains(const Rect& outer, const Rect& inner, double tolerance);

// Largest distance separating two boxes along x or y (0 when they overlap).
double separation(const Rect& a, const Rect& b);

// Area of the geometric union of `boxes`.
double union_area(std::span<const Rect> boxes);

// Area of union(a) ∩ union(b).
double union_intersection_area(std::span<const Rect> a, std::span<const Rect> b);

}  // namespace viscom
