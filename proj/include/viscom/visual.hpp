#pragma once

#include "viscom/features.hpp"
#include "viscom/image.hpp"

namespace viscom {

struct Hsv {
  double h = 0.0;  // degrees in [0, 360)
  double s = 0.0;  // [0, 1]
  double v = 0.0;  // [0, 1]
};

Hsv rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b);

// [avg_brightness, avg_hue, avg_colorfulness, png_size, jpg_size,
//  page_width, page_height, aspect_ratio]. Sizes are encoded bytes per pixel
// under the pinned encoders; hue is the saturation-weighted circular mean
// (0 for achromatic images); colorfulness is mean(S) + population sd(S).
FeatureVector visual_features(const Screenshot& s);

}  // namespace viscom
