#ifndef OCRAUDIT_THRESHOLD_HPP
#define OCRAUDIT_THRESHOLD_HPP

#include <array>
#include <cstdint>

#include "ocraudit/image.hpp"

namespace ocraudit {

namespace detail {

/// Best split of a 256-bin histogram by between-class variance. Thresholds
/// split values into [0..t] and [t+1..255]; ties go to the lower t.
/// Returns -1 when no threshold produces two nonempty classes.
inline int best_between_class_threshold(
    const std::array<std::uint64_t, 256>& hist) {
  std::uint64_t total = 0;
  double weighted_sum = 0.0;
  for (int v = 0; v < 256; ++v) {
    total += hist[v];
    weighted_sum += static_cast<double>(v) * hist[v];
  }

  int best = -1;
  double best_var = -1.0;
  std::uint64_t w0 = 0;
  double sum0 = 0.0;
  for (int t = 0; t < 255; ++t) {
    w0 += hist[t];
    sum0 += static_cast<double>(t) * hist[t];
    const std::uint64_t w1 = total - w0;
    if (w0 == 0 || w1 == 0) continue;
    const double mu0 = sum0 / w0;
    const double mu1 = (weighted_sum - sum0) / w1;
    const double diff = mu0 - mu1;
    const double var_between =
        static_cast<double>(w0) * static_cast<double>(w1) * diff * diff;
    if (var_between > best_var) {
      best_var = var_between;
      best = t;
    }
  }
  return best;
}

}  // namespace detail

/// Best-effort character/background estimate via global bimodal thresholding
/// (maximum between-class variance). The smaller pixel class becomes
/// Character; a size tie resolves to the darker class. Fails on constant
/// images. Ground-truth masks remain the supported path: global thresholding
/// misbehaves under exactly the illumination defects this library audits, so
/// reports produced this way carry an "estimated mask" provenance.
inline PixelClassMask estimate_mask(const GrayImage& image) {
  std::array<std::uint64_t, 256> hist{};
  for (std::uint8_t v : image.data()) ++hist[v];

  const int threshold = detail::best_between_class_threshold(hist);
  if (threshold < 0) {
    throw ValidationError(
        "constant image: no threshold separates two classes");
  }

  std::uint64_t dark = 0;
  for (int v = 0; v <= threshold; ++v) dark += hist[v];
  const std::uint64_t bright =
      static_cast<std::uint64_t>(image.data().size()) - dark;

  // The dark side always has the lower mean, so a tie labels it Character.
  const bool dark_is_character = dark <= bright;

  PixelClassMask mask(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      const bool is_dark = image.at(x, y) <= threshold;
      mask.at(x, y) = (is_dark == dark_is_character) ? PixelClass::Character
                                                     : PixelClass::Background;
    }
  }
  return mask;
}

}  // namespace ocraudit

#endif  // OCRAUDIT_THRESHOLD_HPP
