#include "viscom/aesthetics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>

namespace viscom {

UnknownMeasure::UnknownMeasure(int id)
    : std::invalid_argument("unknown aesthetics measure: " + std::to_string(id)) {}

WrongArity::WrongArity(std::size_t n)
    : std::invalid_argument("order_and_complexity needs 13 values, got " + std::to_string(n)) {}

namespace {

constexpr double kAxisTolerance = 1e-9;
constexpr double kQuantumFraction = 4.0 / 1280.0;  // 4 px on a 1280 px page

double clip01(double v) { return std::clamp(v, 0.0, 1.0); }

// Share of an object on the low side of a midline: 1, 0, or 1/2 when the
// centre sits on the axis.
double low_share(double center, double extent) {
  const double mid = extent / 2.0;
  const double tol = kAxisTolerance * extent;
  if (center < mid - tol) return 1.0;
  if (center > mid + tol) return 0.0;
  return 0.5;
}

// Quadrant shares in reading order UL, UR, LL, LR.
std::array<double, 4> quadrant_shares(const LayoutObject& obj, const ObjectSet& o) {
  const double left = low_share(obj.box.center_x(), o.page_width);
  const double top = low_share(obj.box.center_y(), o.page_height);
  return {left * top, (1.0 - left) * top, left * (1.0 - top), (1.0 - left) * (1.0 - top)};
}

long long quantize(double v, double quantum) {
  return static_cast<long long>(std::floor(v / quantum + 1e-9));
}

double quantum(const ObjectSet& o) { return kQuantumFraction * o.page_width; }

std::size_t distinct_sizes(const ObjectSet& o) {
  double a_max = 0.0;
  for (const auto& obj : o.objects) a_max = std::max(a_max, obj.area());
  if (a_max <= 0.0) return 1;
  std::set<long long> buckets;
  for (const auto& obj : o.objects) buckets.insert(quantize(obj.area(), 0.1 * a_max));
  return buckets.size();
}

std::vector<Rect> boxes(const ObjectSet& o) {
  std::vector<Rect> out;
  out.reserve(o.objects.size());
  for (const auto& obj : o.objects) out.push_back(obj.box);
  return out;
}

double balance(const ObjectSet& o) {
  double wl = 0.0, wr = 0.0, wt = 0.0, wb = 0.0;
  for (const auto& obj : o.objects) {
    const double a = obj.area();
    const double dx = std::abs(obj.box.center_x() - o.page_width / 2.0);
    const double dy = std::abs(obj.box.center_y() - o.page_height / 2.0);
    const double left = low_share(obj.box.center_x(), o.page_width);
    const double top = low_share(obj.box.center_y(), o.page_height);
    wl += a * dx * left;
    wr += a * dx * (1.0 - left);
    wt += a * dy * top;
    wb += a * dy * (1.0 - top);
  }
  auto imbalance = [](double p, double q) {
    const double m = std::max(p, q);
    return m > 0.0 ? (p - q) / m : 0.0;
  };
  return 1.0 - (std::abs(imbalance(wl, wr)) + std::abs(imbalance(wt, wb))) / 2.0;
}

double equilibrium(const ObjectSet& o) {
  double total = 0.0, mx = 0.0, my = 0.0;
  for (const auto& obj : o.objects) {
    const double a = obj.area();
    total += a;
    mx += a * (obj.box.center_x() - o.page_width / 2.0);
    my += a * (obj.box.center_y() - o.page_height / 2.0);
  }
  if (total <= 0.0) return 0.0;
  const double ex = std::abs(mx) / (total * o.page_width / 2.0);
  const double ey = std::abs(my) / (total * o.page_height / 2.0);
  return clip01(1.0 - (ex + ey) / 2.0);
}

double symmetry(const ObjectSet& o) {
  const std::vector<Rect> orig = boxes(o);
  const double base = union_area(orig);
  if (base <= 0.0) return 0.0;
  double sum = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    std::vector<Rect> refl = orig;
    for (Rect& r : refl) {
      if (axis == 0 || axis == 2) r.x = o.page_width - r.x - r.w;
      if (axis == 1 || axis == 2) r.y = o.page_height - r.y - r.h;
    }
    sum += union_intersection_area(orig, refl) / base;
  }
  return clip01(sum / 3.0);
}

double sequence(const ObjectSet& o) {
  std::array<double, 4> w{};
  for (const auto& obj : o.objects) {
    const auto share = quadrant_shares(obj, o);
    for (int q = 0; q < 4; ++q) w[q] += obj.area() * share[q];
  }
  std::array<int, 4> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return w[a] > w[b]; });
  double diff = 0.0;
  for (int rank = 0; rank < 4; ++rank) diff += std::abs(rank - order[rank]);
  return 1.0 - diff / 8.0;
}

double cohesion(const ObjectSet& o) {
  const double page_ar = o.page_height / o.page_width;
  double sum = 0.0;
  for (const auto& obj : o.objects) {
    const double ar = obj.box.h / obj.box.w;
    sum += std::min(ar, page_ar) / std::max(ar, page_ar);
  }
  return sum / static_cast<double>(o.objects.size());
}

double unity(const ObjectSet& o) {
  const double n = static_cast<double>(o.objects.size());
  const double form = 1.0 - (static_cast<double>(distinct_sizes(o)) - 1.0) / n;
  double x0 = o.objects.front().box.x, y0 = o.objects.front().box.y;
  double x1 = o.objects.front().box.right(), y1 = o.objects.front().box.bottom();
  double total = 0.0;
  for (const auto& obj : o.objects) {
    x0 = std::min(x0, obj.box.x);
    y0 = std::min(y0, obj.box.y);
    x1 = std::max(x1, obj.box.right());
    y1 = std::max(y1, obj.box.bottom());
    total += obj.area();
  }
  const double bbox = (x1 - x0) * (y1 - y0);
  const double space = bbox > 0.0 ? std::min(1.0, total / bbox) : 0.0;
  return clip01((form + space) / 2.0);
}

double proportion(const ObjectSet& o) {
  static constexpr std::array<double, 5> kPreferred = {1.0, 1.0 / 1.414, 1.0 / 1.618,
                                                       1.0 / 1.732, 0.5};
  double sum = 0.0;
  for (const auto& obj : o.objects) {
    double ar = obj.box.h / obj.box.w;
    if (ar > 1.0) ar = 1.0 / ar;
    double best = 1.0;
    for (double p : kPreferred) best = std::min(best, std::abs(ar - p));
    sum += clip01(1.0 - best / 0.5);
  }
  return sum / static_cast<double>(o.objects.size());
}

std::pair<std::size_t, std::size_t> alignment_points(const ObjectSet& o) {
  const double q = quantum(o);
  std::set<long long> xs, ys;
  for (const auto& obj : o.objects) {
    xs.insert(quantize(obj.box.x, q));
    ys.insert(quantize(obj.box.y, q));
  }
  return {xs.size(), ys.size()};
}

double simplicity(const ObjectSet& o) {
  const auto [nv, nh] = alignment_points(o);
  return clip01(3.0 / static_cast<double>(nv + nh + o.objects.size()));
}

double density(const ObjectSet& o) {
  const double a = union_area(boxes(o)) / (o.page_width * o.page_height);
  return clip01(1.0 - std::abs(2.0 * a - 1.0));
}

double regularity(const ObjectSet& o) {
  const std::size_t n = o.objects.size();
  const auto [nv, nh] = alignment_points(o);
  const double align = 1.0 - static_cast<double>(nv + nh) / (2.0 * n);
  double space = 1.0;
  if (n > 1) {
    const double q = quantum(o);
    std::set<long long> xs, ys;
    for (const auto& obj : o.objects) {
      xs.insert(quantize(obj.box.x, q));
      ys.insert(quantize(obj.box.y, q));
    }
    std::set<long long> gaps;
    for (const auto* edges : {&xs, &ys}) {
      for (auto it = edges->begin(); std::next(it) != edges->end(); ++it) {
        gaps.insert(*std::next(it) - *it);
      }
    }
    const double d = static_cast<double>(std::max<std::size_t>(1, gaps.size()));
    space = 1.0 - (d - 1.0) / static_cast<double>(n - 1);
  }
  return clip01((align + space) / 2.0);
}

double economy(const ObjectSet& o) { return 1.0 / static_cast<double>(distinct_sizes(o)); }

double homogeneity(const ObjectSet& o) {
  std::array<double, 4> counts{};
  for (const auto& obj : o.objects) {
    const auto share = quadrant_shares(obj, o);
    for (int q = 0; q < 4; ++q) counts[q] += share[q];
  }
  const double n = static_cast<double>(o.objects.size());
  double h = 0.0;
  for (double c : counts) {
    if (c <= 0.0) continue;
    const double p = c / n;
    h -= p * std::log(p);
  }
  return clip01(h / std::log(4.0));
}

double coefficient_of_variation(const std::array<double, 4>& v) {
  const double mean = (v[0] + v[1] + v[2] + v[3]) / 4.0;
  if (mean <= 0.0) return 0.0;
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  return std::sqrt(var / 4.0) / mean;
}

double rhythm(const ObjectSet& o) {
  if (o.objects.size() == 1) return 1.0;
  std::array<double, 4> area{}, weight{}, dist{};
  for (const auto& obj : o.objects) {
    const auto share = quadrant_shares(obj, o);
    const double d = std::hypot(obj.box.center_x() - o.page_width / 2.0,
                                obj.box.center_y() - o.page_height / 2.0);
    for (int q = 0; q < 4; ++q) {
      area[q] += obj.area() * share[q];
      weight[q] += share[q];
      dist[q] += d * share[q];
    }
  }
  for (int q = 0; q < 4; ++q) dist[q] = weight[q] > 0.0 ? dist[q] / weight[q] : 0.0;
  const double cv = (coefficient_of_variation(area) + coefficient_of_variation(dist)) / 2.0;
  return 1.0 - std::min(1.0, cv);
}

}  // namespace

ObjectSet derive_objects(const VipsTree& t, const RenderGeometry& g) {
  ObjectSet o;
  o.page_width = g.page_width;
  o.page_height = g.page_height;
  for (const VipsBlock* leaf : leaves(t)) {
    if (leaf->box.empty()) continue;
    LayoutObject obj;
    obj.box = leaf->box;
    switch (leaf->kind) {
      case BlockKind::kText:
        obj.cls = ObjectClass::kText;
        break;
      case BlockKind::kImage:
        obj.cls = ObjectClass::kImage;
        break;
      case BlockKind::kForm:
        obj.cls = ObjectClass::kForm;
        break;
      default:
        obj.cls = ObjectClass::kOther;
        break;
    }
    o.objects.push_back(obj);
  }
  return o;
}

ObjectSet filter_class(const ObjectSet& o, ObjectClass c) {
  ObjectSet out;
  out.page_width = o.page_width;
  out.page_height = o.page_height;
  for (const auto& obj : o.objects) {
    if (obj.cls == c) out.objects.push_back(obj);
  }
  return out;
}

double aesthetic_measure(int m, const ObjectSet& o) {
  if (m < 1 || m > kMeasureCount) throw UnknownMeasure(m);
  if (o.page_width <= 0.0 || o.page_height <= 0.0) {
    throw std::invalid_argument("page dimensions must be > 0");
  }
  if (o.objects.empty()) return 0.0;
  switch (static_cast<Measure>(m)) {
    case Measure::kBalance:
      return clip01(balance(o));
    case Measure::kEquilibrium:
      return equilibrium(o);
    case Measure::kSymmetry:
      return symmetry(o);
    case Measure::kSequence:
      return clip01(sequence(o));
    case Measure::kCohesion:
      return clip01(cohesion(o));
    case Measure::kUnity:
      return unity(o);
    case Measure::kProportion:
      return clip01(proportion(o));
    case Measure::kSimplicity:
      return simplicity(o);
    case Measure::kDensity:
      return density(o);
    case Measure::kRegularity:
      return regularity(o);
    case Measure::kEconomy:
      return clip01(economy(o));
    case Measure::kHomogeneity:
      return homogeneity(o);
    case Measure::kRhythm:
      return clip01(rhythm(o));
  }
  throw UnknownMeasure(m);
}

double aesthetic_measure(Measure m, const ObjectSet& o) {
  return aesthetic_measure(static_cast<int>(m), o);
}

double order_and_complexity(std::span<const double> values) {
  if (values.size() != static_cast<std::size_t>(kMeasureCount)) {
    throw WrongArity(values.size());
  }
  return std::accumulate(values.begin(), values.end(), 0.0) / kMeasureCount;
}

std::vector<double> aesthetics_block(const ObjectSet& o) {
  std::vector<double> out;
  out.reserve(kMeasureCount + 1);
  for (int m = 1; m <= kMeasureCount; ++m) out.push_back(aesthetic_measure(m, o));
  out.push_back(order_and_complexity(out));
  return out;
}

FeatureVector aesthetics_features(const ObjectSet& o) {
  std::vector<double> values;
  values.reserve(registry::kAestheticsCount);
  for (int c = 0; c < 5; ++c) {
    const ObjectSet subset = c == 0 ? o : filter_class(o, static_cast<ObjectClass>(c - 1));
    const auto block = aesthetics_block(subset);
    values.insert(values.end(), block.begin(), block.end());
  }
  return FeatureVector(registry::aesthetics(), std::move(values));
}

FeatureVector aesthetics_features(const VipsTree& t, const RenderGeometry& g) {
  return aesthetics_features(derive_objects(t, g));
}

}  // namespace viscom
