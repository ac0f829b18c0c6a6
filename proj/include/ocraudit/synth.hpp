#ifndef OCRAUDIT_SYNTH_HPP
#define OCRAUDIT_SYNTH_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <variant>
#include <vector>

#include "ocraudit/image.hpp"

namespace ocraudit {

// Illumination fields compose by pointwise multiplication, mirroring light
// falling on a surface of uniform reflectance.

struct Uniform {
  double m = 1.0;
};

struct LinearGradient {
  enum class Axis { X, Y };
  double m0 = 1.0;
  double m1 = 1.0;
  Axis axis = Axis::X;
};

struct Spotlight {
  double cx = 0.0;
  double cy = 0.0;
  double sigma = 1.0;
  double amplitude = 0.0;  // multiplier is 1 + amplitude * gaussian
};

struct ShadowRect {
  Box box;
  double m = 1.0;  // applied inside the box only
};

using IllumField = std::variant<Uniform, LinearGradient, Spotlight, ShadowRect>;

struct Glyph {
  int digit = 0;  // 0-9, rendered from the built-in 5x7 font
  int x = 0;
  int y = 0;
  int scale = 1;
};

/// Deterministic synthetic document scene: digit glyphs on a flat page, with
/// illumination fields layered on top. Noise is off by default; fixtures
/// that must be bit-exact keep it off.
struct SceneSpec {
  int width = 0;
  int height = 0;
  int bg_level = 200;
  int char_level = 50;
  std::vector<Glyph> glyphs;
  std::vector<IllumField> fields;
  std::uint32_t seed = 0;
  double noise_sigma = 0.0;
};

namespace detail {

// 5x7 digit bitmaps, one row per byte, bit 4 = leftmost column.
inline constexpr std::array<std::array<std::uint8_t, 7>, 10> kDigitFont = {{
    {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E},  // 0
    {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E},  // 1
    {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F},  // 2
    {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E},  // 3
    {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02},  // 4
    {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E},  // 5
    {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E},  // 6
    {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08},  // 7
    {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E},  // 8
    {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C},  // 9
}};

inline double field_multiplier(const IllumField& field, int x, int y,
                               int width, int height) {
  struct Visitor {
    int x, y, width, height;

    double operator()(const Uniform& f) const { return f.m; }

    double operator()(const LinearGradient& f) const {
      double t = 0.0;
      if (f.axis == LinearGradient::Axis::X) {
        t = width > 1 ? static_cast<double>(x) / (width - 1) : 0.0;
      } else {
        t = height > 1 ? static_cast<double>(y) / (height - 1) : 0.0;
      }
      return f.m0 + (f.m1 - f.m0) * t;
    }

    double operator()(const Spotlight& f) const {
      const double dx = x - f.cx;
      const double dy = y - f.cy;
      return 1.0 + f.amplitude *
                       std::exp(-(dx * dx + dy * dy) / (2.0 * f.sigma * f.sigma));
    }

    double operator()(const ShadowRect& f) const {
      return f.box.contains(x, y) ? f.m : 1.0;
    }
  };
  return std::visit(Visitor{x, y, width, height}, field);
}

// Portable Box-Muller on top of mt19937 so the same spec yields the same
// bytes regardless of the standard library's normal_distribution.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint32_t seed) : rng_(seed) {}

  double next(double sigma) {
    const double u1 =
        (static_cast<double>(rng_()) + 1.0) / (static_cast<double>(rng_.max()) + 2.0);
    const double u2 =
        static_cast<double>(rng_()) / (static_cast<double>(rng_.max()) + 1.0);
    const double two_pi = 6.283185307179586476925286766559;
    return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

 private:
  std::mt19937 rng_;
};

inline void validate(const SceneSpec& spec) {
  check_dimensions(spec.width, spec.height);
  if (spec.bg_level < 0 || spec.bg_level > 255 || spec.char_level < 0 ||
      spec.char_level > 255) {
    throw ValidationError("base levels must be in [0, 255]");
  }
  if (spec.noise_sigma < 0.0) {
    throw ValidationError("noise_sigma must be >= 0");
  }
  for (const Glyph& g : spec.glyphs) {
    if (g.digit < 0 || g.digit > 9) {
      throw ValidationError("glyph digit must be 0-9");
    }
    if (g.scale < 1) throw ValidationError("glyph scale must be >= 1");
    const Box box{g.x, g.y, 5 * g.scale, 7 * g.scale};
    if (box.x < 0 || box.y < 0 || box.right() > spec.width ||
        box.bottom() > spec.height) {
      throw ValidationError("glyph box outside canvas");
    }
  }
  for (const IllumField& field : spec.fields) {
    if (const auto* u = std::get_if<Uniform>(&field)) {
      if (u->m < 0.0) throw ValidationError("uniform multiplier must be >= 0");
    } else if (const auto* g = std::get_if<LinearGradient>(&field)) {
      if (g->m0 < 0.0 || g->m1 < 0.0) {
        throw ValidationError("gradient multipliers must be >= 0");
      }
    } else if (const auto* s = std::get_if<Spotlight>(&field)) {
      if (s->sigma <= 0.0) throw ValidationError("spotlight sigma must be > 0");
      if (s->amplitude < -1.0) {
        throw ValidationError("spotlight amplitude must be >= -1");
      }
    } else if (const auto* r = std::get_if<ShadowRect>(&field)) {
      if (r->m < 0.0) throw ValidationError("shadow multiplier must be >= 0");
    }
  }
}

}  // namespace detail

/// Nominal box of a glyph before illumination (the full 5x7 cell).
inline Box glyph_box(const Glyph& g) {
  return Box{g.x, g.y, 5 * g.scale, 7 * g.scale};
}

/// Renders the scene. Character pixels in the mask are exactly the glyph
/// bitmap pixels; the image multiplies the base level by every field and
/// clamps to [0, 255]. Identical specs (seed included) produce identical
/// bytes.
inline std::pair<GrayImage, PixelClassMask> render(const SceneSpec& spec) {
  detail::validate(spec);

  PixelClassMask mask(spec.width, spec.height, PixelClass::Background);
  for (const Glyph& g : spec.glyphs) {
    const auto& rows = detail::kDigitFont[g.digit];
    for (int ry = 0; ry < 7; ++ry) {
      for (int rx = 0; rx < 5; ++rx) {
        if (!(rows[ry] & (0x10 >> rx))) continue;
        for (int sy = 0; sy < g.scale; ++sy) {
          for (int sx = 0; sx < g.scale; ++sx) {
            mask.at(g.x + rx * g.scale + sx, g.y + ry * g.scale + sy) =
                PixelClass::Character;
          }
        }
      }
    }
  }

  GrayImage image(spec.width, spec.height);
  detail::GaussianSource noise(spec.seed);
  std::vector<double> multipliers(spec.fields.size());
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      const double base = mask.at(x, y) == PixelClass::Character
                              ? spec.char_level
                              : spec.bg_level;
      // Multiply in sorted order so the product does not depend on how the
      // fields list is arranged (double multiplication is not associative).
      for (std::size_t i = 0; i < spec.fields.size(); ++i) {
        multipliers[i] = detail::field_multiplier(spec.fields[i], x, y,
                                                  spec.width, spec.height);
      }
      std::sort(multipliers.begin(), multipliers.end());
      double multiplier = 1.0;
      for (double m : multipliers) multiplier *= m;
      double value = base * multiplier;
      if (spec.noise_sigma > 0.0) value += noise.next(spec.noise_sigma);
      const long long rounded = std::llround(value);
      image.at(x, y) = static_cast<std::uint8_t>(
          std::min(255LL, std::max(0LL, rounded)));
    }
  }
  return {std::move(image), std::move(mask)};
}

}  // namespace ocraudit

#endif  // OCRAUDIT_SYNTH_HPP
