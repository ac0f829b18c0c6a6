#ifndef OCRAUDIT_HISTOGRAM_HPP
#define OCRAUDIT_HISTOGRAM_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>

#include "ocraudit/image.hpp"

namespace ocraudit {

/// 256-bin count vector over pixel values for one pixel class in one scope
/// (whole image, or one region box).
struct Histogram {
  std::array<std::uint64_t, 256> bins{};
  std::uint64_t total = 0;
  PixelClass pixel_class = PixelClass::Character;
  std::optional<Box> region;  // nullopt = whole image

  void add(std::uint8_t value) {
    ++bins[value];
    ++total;
  }
};

/// Counts pixels of `pixel_class` inside `region` (whole image when absent).
/// Ignore-labeled pixels are never counted.
inline Histogram compute_histogram(const GrayImage& image,
                                   const PixelClassMask& mask,
                                   PixelClass pixel_class,
                                   std::optional<Box> region = std::nullopt) {
  if (!mask.same_dimensions(image)) {
    throw ValidationError("mask dimensions do not match image");
  }
  if (pixel_class == PixelClass::Ignore) {
    throw ValidationError("histograms are defined for Character or Background");
  }
  Box scope = region.value_or(image.bounds());
  if (scope.x < 0 || scope.y < 0 || scope.right() > image.width() ||
      scope.bottom() > image.height() || scope.empty()) {
    throw ValidationError("histogram scope box outside image bounds");
  }

  Histogram h;
  h.pixel_class = pixel_class;
  h.region = region;
  for (int y = scope.y; y < scope.bottom(); ++y) {
    for (int x = scope.x; x < scope.right(); ++x) {
      if (mask.at(x, y) == pixel_class) h.add(image.at(x, y));
    }
  }
  return h;
}

/// Trimmed support [lo, hi]: lo is the value at rank floor(alpha*total)+1
/// from the bottom, hi the same rank from the top. alpha=0 gives the exact
/// min/max support.
inline std::pair<int, int> trimmed_interval(const Histogram& h, double alpha) {
  if (h.total == 0) throw ValidationError("empty histogram");
  if (!(alpha >= 0.0 && alpha < 0.5)) {
    throw ValidationError("alpha must be in [0, 0.5)");
  }

  const std::uint64_t trim =
      static_cast<std::uint64_t>(std::floor(alpha * static_cast<double>(h.total)));
  const std::uint64_t lo_rank = trim + 1;          // 1-based from the bottom
  const std::uint64_t hi_rank = h.total - trim;    // 1-based from the bottom

  int lo = 0;
  int hi = 255;
  std::uint64_t cum = 0;
  for (int v = 0; v < 256; ++v) {
    cum += h.bins[v];
    if (cum >= lo_rank) {
      lo = v;
      break;
    }
  }
  cum = 0;
  for (int v = 0; v < 256; ++v) {
    cum += h.bins[v];
    if (cum >= hi_rank) {
      hi = v;
      break;
    }
  }
  return {lo, hi};
}

}  // namespace ocraudit

#endif  // OCRAUDIT_HISTOGRAM_HPP
