#ifndef OCRAUDIT_SEPARATION_HPP
#define OCRAUDIT_SEPARATION_HPP

#include <algorithm>
#include <utility>

#include "ocraudit/histogram.hpp"
#include "ocraudit/image.hpp"
#include "ocraudit/regions.hpp"

namespace ocraudit {

/// Quantifies "the distributions are separated": the trimmed supports of the
/// two classes must be disjoint with at least `min_gap` between them.
/// alpha=0 with min_gap=1 is the literal reading (max of one class strictly
/// below min of the other); the defaults tolerate salt-and-pepper outliers.
struct SeparationPolicy {
  double alpha = 0.005;
  int min_gap = 1;
};

struct SeparationResult {
  bool separated = false;
  std::pair<int, int> char_interval{0, 0};
  std::pair<int, int> bg_interval{0, 0};
  int gap = 0;  // positive: empty value band between the intervals

  friend bool operator==(const SeparationResult&, const SeparationResult&) =
      default;
};

inline void validate(const SeparationPolicy& policy) {
  if (!(policy.alpha >= 0.0 && policy.alpha < 0.5)) {
    throw ValidationError("alpha must be in [0, 0.5)");
  }
  if (policy.min_gap < 1) throw ValidationError("min_gap must be >= 1");
}

/// Symmetric in argument exchange: only the interval labels swap, the
/// separated verdict does not.
inline SeparationResult check_separation(const Histogram& h_char,
                                         const Histogram& h_bg,
                                         const SeparationPolicy& policy = {}) {
  validate(policy);
  if (h_char.total == 0 || h_bg.total == 0) {
    throw ValidationError("separation requires both class histograms nonempty");
  }
  SeparationResult r;
  r.char_interval = trimmed_interval(h_char, policy.alpha);
  r.bg_interval = trimmed_interval(h_bg, policy.alpha);
  r.gap = std::max(r.bg_interval.first - r.char_interval.second,
                   r.char_interval.first - r.bg_interval.second);
  r.separated = r.gap >= policy.min_gap;
  return r;
}

/// Tonal clipping thresholds: pixels at value >= t_white count as white,
/// <= t_black as black; a flag raises when the clipped fraction reaches
/// f_sat. Defaults catch near-clipping sensors that never emit exact 0/255.
struct SaturationPolicy {
  int t_black = 2;
  int t_white = 253;
  double f_sat = 0.10;
};

struct SaturationFlags {
  bool blown_out = false;
  bool blocked_up = false;
  double white_fraction = 0.0;
  double black_fraction = 0.0;

  friend bool operator==(const SaturationFlags&, const SaturationFlags&) =
      default;
};

inline void validate(const SaturationPolicy& policy) {
  if (policy.t_black < 0 || policy.t_black > 255 || policy.t_white < 0 ||
      policy.t_white > 255 || policy.t_black >= policy.t_white) {
    throw ValidationError("saturation thresholds must satisfy 0 <= t_black < t_white <= 255");
  }
  if (!(policy.f_sat >= 0.0 && policy.f_sat <= 1.0)) {
    throw ValidationError("f_sat must be in [0, 1]");
  }
}

/// Clipped fractions over all non-Ignore pixels (both classes) in the padded
/// region. A flag raises only when the region's separation test also fails:
/// legitimately dark ink on bright paper clips nothing it needs.
/// `region_separated` is the verdict of that test.
inline SaturationFlags detect_saturation(const GrayImage& image,
                                         const PixelClassMask& mask,
                                         const CharRegion& region,
                                         const SaturationPolicy& policy,
                                         bool region_separated) {
  validate(policy);
  if (!mask.same_dimensions(image)) {
    throw ValidationError("mask dimensions do not match image");
  }
  const Box padded = region.box.dilated(region.pad).clipped(image.bounds());
  if (padded.empty()) throw ValidationError("region outside image bounds");

  std::uint64_t considered = 0;
  std::uint64_t white = 0;
  std::uint64_t black = 0;
  for (int y = padded.y; y < padded.bottom(); ++y) {
    for (int x = padded.x; x < padded.right(); ++x) {
      if (mask.at(x, y) == PixelClass::Ignore) continue;
      ++considered;
      const int v = image.at(x, y);
      if (v >= policy.t_white) ++white;
      if (v <= policy.t_black) ++black;
    }
  }
  if (considered == 0) {
    throw ValidationError("region contains no non-Ignore pixels");
  }

  SaturationFlags flags;
  flags.white_fraction = static_cast<double>(white) / considered;
  flags.black_fraction = static_cast<double>(black) / considered;
  flags.blown_out = flags.white_fraction >= policy.f_sat && !region_separated;
  flags.blocked_up = flags.black_fraction >= policy.f_sat && !region_separated;
  return flags;
}

/// Standalone variant that runs the region's own separation test: Character
/// pixels from the box, Background pixels from the padded box. A region
/// missing either class cannot demonstrate separation and counts as not
/// separated.
inline SaturationFlags detect_saturation(
    const GrayImage& image, const PixelClassMask& mask,
    const CharRegion& region, const SaturationPolicy& policy = {},
    const SeparationPolicy& separation_policy = {}) {
  validate(separation_policy);
  const Box box = region.box.clipped(image.bounds());
  if (box.empty()) throw ValidationError("region outside image bounds");
  const Box padded = region.box.dilated(region.pad).clipped(image.bounds());

  const Histogram h_char =
      compute_histogram(image, mask, PixelClass::Character, box);
  const Histogram h_bg =
      compute_histogram(image, mask, PixelClass::Background, padded);
  bool separated = false;
  if (h_char.total > 0 && h_bg.total > 0) {
    separated = check_separation(h_char, h_bg, separation_policy).separated;
  }
  return detect_saturation(image, mask, region, policy, separated);
}

}  // namespace ocraudit

#endif  // OCRAUDIT_SEPARATION_HPP
