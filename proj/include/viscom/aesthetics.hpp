#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "viscom/features.hpp"
#include "viscom/rect.hpp"
#include "viscom/vips.hpp"

namespace viscom {

enum class ObjectClass { kText, kImage, kForm, kOther };

struct LayoutObject {
  Rect box;
  ObjectClass cls = ObjectClass::kOther;
  double area() const { return box.area(); }
};

struct ObjectSet {
  std::vector<LayoutObject> objects;
  double page_width = 0.0;
  double page_height = 0.0;
};

class UnknownMeasure : public std::invalid_argument {
 public:
  explicit UnknownMeasure(int id);
};

class WrongArity : public std::invalid_argument {
 public:
  explicit WrongArity(std::size_t n);
};

// Measure ids in registry order.
enum class Measure {
  kBalance = 1,
  kEquilibrium,
  kSymmetry,
  kSequence,
  kCohesion,
  kUnity,
  kProportion,
  kSimplicity,
  kDensity,
  kRegularity,
  kEconomy,
  kHomogeneity,
  kRhythm,
};

inline constexpr int kMeasureCount = 13;

// One object per positive-area VIPS leaf, class taken from the leaf kind.
ObjectSet derive_objects(const VipsTree& t, const RenderGeometry& g);

// Subset of `o` holding only objects of class `c`.
ObjectSet filter_class(const ObjectSet& o, ObjectClass c);

// Value in [0, 1]. Empty sets give 0. Throws UnknownMeasure outside 1..13.
double aesthetic_measure(int m, const ObjectSet& o);
double aesthetic_measure(Measure m, const ObjectSet& o);

// Mean of exactly 13 values; WrongArity otherwise.
double order_and_complexity(std::span<const double> values);

// 14 values (13 measures + order_and_complexity) for one object set.
std::vector<double> aesthetics_block(const ObjectSet& o);

// Classes all, text, image, form, other; 14 values each.
FeatureVector aesthetics_features(const ObjectSet& o);
FeatureVector aesthetics_features(const VipsTree& t, const RenderGeometry& g);

}  // namespace viscom
