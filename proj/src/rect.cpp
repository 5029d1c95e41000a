#include "viscom/rect.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace viscom {

Rect intersect(const Rect& a, const Rect& b) {
  const double x0 = std::max(a.x, b.x);
  const double y0 = std::max(a.y, b.y);
  const double x1 = std::min(a.right(), b.right());
  const double y1 = std::min(a.bottom(), b.bottom());
  return Rect{x0, y0, std::max(0.0, x1 - x0), std::max(0.0, y1 - y0)};
}

bool contains(const Rect& outer, const Rect& inner, double tolerance) {
  return inner.x >= outer.x - tolerance && inner.y >= outer.y - tolerance &&
         inner.right() <= outer.right() + tolerance &&
         inner.bottom() <= outer.bottom() + tolerance;
}

double separation(const Rect& a, const Rect& b) {
  const double dx =
      std::max(0.0, std::max(a.x, b.x) - std::min(a.right(), b.right()));
  const double dy =
      std::max(0.0, std::max(a.y, b.y) - std::min(a.bottom(), b.bottom()));
  return std::max(dx, dy);
}

namespace {

using Interval = std::pair<double, double>;

// Sorted, merged y-intervals of the boxes that fully span the strip [x0, x1).
std::vector<Interval> strip_cover(std::span<const Rect> boxes, double x0,
                                  double x1) {
  std::vector<Interval> spans;
  for (const Rect& r : boxes) {
    if (r.empty()) continue;
    if (r.x <= x0 && r.right() >= x1) spans.emplace_back(r.y, r.bottom());
  }
  std::sort(spans.begin(), spans.end());
  std::vector<Interval> merged;
  for (const Interval& s : spans) {
    if (!merged.empty() && s.first <= merged.back().second) {
      merged.back().second = std::max(merged.back().second, s.second);
    } else {
      merged.push_back(s);
    }
  }
  return merged;
}

double covered_length(const std::vector<Interval>& spans) {
  double total = 0.0;
  for (const auto& [lo, hi] : spans) total += hi - lo;
  return total;
}

double overlap_length(const std::vector<Interval>& a,
                      const std::vector<Interval>& b) {
  double total = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    const double lo = std::max(a[i].first, b[j].first);
    const double hi = std::min(a[i].second, b[j].second);
    if (hi > lo) total += hi - lo;
    if (a[i].second < b[j].second) {
      ++i;
    } else {
      ++j;
    }
  }
  return total;
}

std::vector<double> x_edges(std::span<const Rect> a, std::span<const Rect> b) {
  std::vector<double> xs;
  xs.reserve(2 * (a.size() + b.size()));
  for (const Rect& r : a) {
    if (r.empty()) continue;
    xs.push_back(r.x);
    xs.push_back(r.right());
  }
  for (const Rect& r : b) {
    if (r.empty()) continue;
    xs.push_back(r.x);
    xs.push_back(r.right());
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

}  // namespace

double union_area(std::span<const Rect> boxes) {
  const std::vector<double> xs = x_edges(boxes, {});
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    total += (xs[i + 1] - xs[i]) * covered_length(strip_cover(boxes, xs[i], xs[i + 1]));
  }
  return total;
}

double union_intersection_area(std::span<const Rect> a,
                               std::span<const Rect> b) {
  const std::vector<double> xs = x_edges(a, b);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const auto ca = strip_cover(a, xs[i], xs[i + 1]);
    if (ca.empty()) continue;
    const auto cb = strip_cover(b, xs[i], xs[i + 1]);
    total += (xs[i + 1] - xs[i]) * overlap_length(ca, cb);
  }
  return total;
}

}  // namespace viscom
