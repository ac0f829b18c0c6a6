#ifndef OCRAUDIT_IMAGE_HPP
#define OCRAUDIT_IMAGE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ocraudit {

/// Unreadable or undecodable input (missing file, truncated stream,
/// unsupported encoding). The CLI maps this to exit code 1.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input that decodes fine but violates a contract (dimension mismatch,
/// illegal label byte, out-of-range parameter). The CLI maps this to
/// exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-pixel label distinguishing glyph strokes from the page surface.
/// Ignore pixels take part in no histogram and no region.
enum class PixelClass : std::uint8_t { Character, Background, Ignore };

/// Axis-aligned rectangle in pixel coordinates, origin top-left.
struct Box {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  int right() const { return x + w; }    // one past the last column
  int bottom() const { return y + h; }   // one past the last row

  bool contains(int px, int py) const {
    return px >= x && px < right() && py >= y && py < bottom();
  }

  bool intersects(const Box& other) const {
    return x < other.right() && other.x < right() &&
           y < other.bottom() && other.y < bottom();
  }

  /// Grows the box by `margin` pixels on every side.
  Box dilated(int margin) const {
    return Box{x - margin, y - margin, w + 2 * margin, h + 2 * margin};
  }

  /// Intersection with `bounds`; degenerates to w==0/h==0 when disjoint.
  Box clipped(const Box& bounds) const {
    const int x0 = std::max(x, bounds.x);
    const int y0 = std::max(y, bounds.y);
    const int x1 = std::min(right(), bounds.right());
    const int y1 = std::min(bottom(), bounds.bottom());
    return Box{x0, y0, std::max(0, x1 - x0), std::max(0, y1 - y0)};
  }

  bool empty() const { return w <= 0 || h <= 0; }

  friend bool operator==(const Box&, const Box&) = default;
};

namespace detail {

inline void check_dimensions(int width, int height) {
  if (width < 1 || height < 1) {
    throw ValidationError("zero-dimension image (" + std::to_string(width) +
                          "x" + std::to_string(height) + ")");
  }
}

}  // namespace detail

/// 8-bit single-channel raster, row-major. 0 is black, 255 is white.
class GrayImage {
 public:
  GrayImage(int width, int height, std::uint8_t fill = 0)
      : width_(width), height_(height) {
    detail::check_dimensions(width, height);
    data_.assign(static_cast<std::size_t>(width) * height, fill);
  }

  GrayImage(int width, int height, std::vector<std::uint8_t> data)
      : width_(width), height_(height), data_(std::move(data)) {
    detail::check_dimensions(width, height);
    if (data_.size() != static_cast<std::size_t>(width) * height) {
      throw ValidationError("pixel buffer size does not match dimensions");
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }
  Box bounds() const { return Box{0, 0, width_, height_}; }
  bool in_bounds(int x, int y) const { return bounds().contains(x, y); }

  std::uint8_t at(int x, int y) const {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }
  std::uint8_t& at(int x, int y) {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }

  const std::vector<std::uint8_t>& data() const { return data_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> data_;
};

/// Per-pixel class labels aligned to a GrayImage of the same dimensions.
class PixelClassMask {
 public:
  PixelClassMask(int width, int height,
                 PixelClass fill = PixelClass::Background)
      : width_(width), height_(height) {
    detail::check_dimensions(width, height);
    labels_.assign(static_cast<std::size_t>(width) * height, fill);
  }

  PixelClassMask(int width, int height, std::vector<PixelClass> labels)
      : width_(width), height_(height), labels_(std::move(labels)) {
    detail::check_dimensions(width, height);
    if (labels_.size() != static_cast<std::size_t>(width) * height) {
      throw ValidationError("label buffer size does not match dimensions");
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }
  Box bounds() const { return Box{0, 0, width_, height_}; }
  bool in_bounds(int x, int y) const { return bounds().contains(x, y); }

  PixelClass at(int x, int y) const {
    return labels_[static_cast<std::size_t>(y) * width_ + x];
  }
  PixelClass& at(int x, int y) {
    return labels_[static_cast<std::size_t>(y) * width_ + x];
  }

  const std::vector<PixelClass>& labels() const { return labels_; }

  std::size_t count(PixelClass c) const {
    std::size_t n = 0;
    for (PixelClass label : labels_) {
      if (label == c) ++n;
    }
    return n;
  }

  bool same_dimensions(const GrayImage& image) const {
    return width_ == image.width() && height_ == image.height();
  }

  friend bool operator==(const PixelClassMask&, const PixelClassMask&) =
      default;

 private:
  int width_;
  int height_;
  std::vector<PixelClass> labels_;
};

/// Standard luma weighting, rounded half up. White stays white because the
/// weights sum to one.
inline std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  const double y = 0.299 * r + 0.587 * g + 0.114 * b;
  const long v = static_cast<long>(std::floor(y + 0.5));
  return static_cast<std::uint8_t>(std::min(255L, std::max(0L, v)));
}

}  // namespace ocraudit

#endif  // OCRAUDIT_IMAGE_HPP
