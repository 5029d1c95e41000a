#include "viscom/visual.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>
#include <utility>

namespace viscom {

Hsv rgb_to_hsv(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
  const double r = r8 / 255.0;
  const double g = g8 / 255.0;
  const double b = b8 / 255.0;
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double delta = mx - mn;
  Hsv out;
  out.v = mx;
  out.s = mx > 0.0 ? delta / mx : 0.0;
  if (delta > 0.0) {
    double h;
    if (mx == r) {
      h = 60.0 * std::fmod((g - b) / delta, 6.0);
    } else if (mx == g) {
      h = 60.0 * ((b - r) / delta + 2.0);
    } else {
      h = 60.0 * ((r - g) / delta + 4.0);
    }
    if (h < 0.0) h += 360.0;
    if (h >= 360.0) h -= 360.0;
    out.h = h;
  }
  return out;
}

FeatureVector visual_features(const Screenshot& s) {
  const std::size_t n = s.pixel_count();
  if (n == 0 || s.pixels.size() != 3 * n) throw ImageError("invalid screenshot");

  // Accumulate per distinct colour so the sums do not depend on pixel order.
  std::unordered_map<std::uint32_t, std::uint32_t> histogram;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t key = (static_cast<std::uint32_t>(s.pixels[3 * i]) << 16) |
                              (static_cast<std::uint32_t>(s.pixels[3 * i + 1]) << 8) |
                              s.pixels[3 * i + 2];
    ++histogram[key];
  }
  std::vector<std::pair<std::uint32_t, std::uint32_t>> counts(histogram.begin(),
                                                              histogram.end());
  std::sort(counts.begin(), counts.end());
  double sum_v = 0.0;
  double sum_s = 0.0;
  double sum_s2 = 0.0;
  double hx = 0.0;
  double hy = 0.0;
  for (const auto& [key, c] : counts) {
    const Hsv p = rgb_to_hsv(static_cast<std::uint8_t>(key >> 16),
                             static_cast<std::uint8_t>(key >> 8),
                             static_cast<std::uint8_t>(key));
    sum_v += c * p.v;
    sum_s += c * p.s;
    sum_s2 += c * p.s * p.s;
    const double rad = p.h * std::numbers::pi / 180.0;
    hx += c * p.s * std::cos(rad);
    hy += c * p.s * std::sin(rad);
  }
  const double dn = static_cast<double>(n);
  const double brightness = sum_v / dn;
  const double mean_s = sum_s / dn;
  const double var_s = std::max(0.0, sum_s2 / dn - mean_s * mean_s);
  const double colorfulness = mean_s + std::sqrt(var_s);

  double hue = 0.0;
  if (std::hypot(hx, hy) > 1e-9 * dn) {
    hue = std::atan2(hy, hx) * 180.0 / std::numbers::pi;
    if (hue < 0.0) hue += 360.0;
    if (hue >= 360.0) hue = 0.0;
  }

  const double png = static_cast<double>(encode_png(s).size()) / dn;
  const double jpg = static_cast<double>(encode_jpeg(s).size()) / dn;
  return FeatureVector(registry::visual(),
                       std::vector<double>{brightness, hue, colorfulness, png, jpg,
                                           static_cast<double>(s.width),
                                           static_cast<double>(s.height),
                                           static_cast<double>(s.width) / s.height});
}

}  // namespace viscom
