#ifndef OCRAUDIT_REGIONS_HPP
#define OCRAUDIT_REGIONS_HPP

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "ocraudit/image.hpp"

namespace ocraudit {

struct Pixel {
  int x = 0;
  int y = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

/// A one-character region: the minimal box circumscribing one glyph's
/// Character pixels, plus the pixels themselves. `pad` is the context margin
/// used when sampling Background pixels around the box (a minimal box of a
/// solid glyph may contain none).
struct CharRegion {
  Box box;
  int pad = 2;
  std::vector<Pixel> member_pixels;  // sorted by (y, x)
};

namespace detail {

inline Box bounding_box(const std::vector<Pixel>& pixels) {
  Box box{pixels.front().x, pixels.front().y, 1, 1};
  int x1 = pixels.front().x;
  int y1 = pixels.front().y;
  for (const Pixel& p : pixels) {
    box.x = std::min(box.x, p.x);
    box.y = std::min(box.y, p.y);
    x1 = std::max(x1, p.x);
    y1 = std::max(y1, p.y);
  }
  box.w = x1 - box.x + 1;
  box.h = y1 - box.y + 1;
  return box;
}

inline void sort_pixels(std::vector<Pixel>& pixels) {
  std::sort(pixels.begin(), pixels.end(), [](const Pixel& a, const Pixel& b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  });
}

struct UnionFind {
  std::vector<int> parent;

  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }

  int find(int i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  }

  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace detail

/// Connected components of Character pixels. With merge_gap > 0, components
/// whose boxes, each dilated by merge_gap, intersect are merged transitively
/// (multi-stroke glyphs). Result is sorted by (y, x) of the box origin and
/// partitions the Character pixels exactly.
inline std::vector<CharRegion> extract_char_regions(const PixelClassMask& mask,
                                                    int connectivity = 8,
                                                    int merge_gap = 0,
                                                    int pad = 2) {
  if (connectivity != 4 && connectivity != 8) {
    throw ValidationError("connectivity must be 4 or 8");
  }
  if (merge_gap < 0) throw ValidationError("merge_gap must be >= 0");
  if (pad < 0) throw ValidationError("pad must be >= 0");

  const int w = mask.width();
  const int h = mask.height();
  std::vector<int> label(static_cast<std::size_t>(w) * h, -1);
  std::vector<std::vector<Pixel>> components;

  static const int dx8[] = {-1, 0, 1, -1, 1, -1, 0, 1};
  static const int dy8[] = {-1, -1, -1, 0, 0, 1, 1, 1};
  static const int dx4[] = {0, -1, 1, 0};
  static const int dy4[] = {-1, 0, 0, 1};
  const int* dx = connectivity == 8 ? dx8 : dx4;
  const int* dy = connectivity == 8 ? dy8 : dy4;
  const int nn = connectivity;

  std::vector<Pixel> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * w + x;
      if (mask.at(x, y) != PixelClass::Character || label[idx] >= 0) continue;

      const int id = static_cast<int>(components.size());
      components.emplace_back();
      label[idx] = id;
      stack.assign(1, Pixel{x, y});
      while (!stack.empty()) {
        const Pixel p = stack.back();
        stack.pop_back();
        components[id].push_back(p);
        for (int k = 0; k < nn; ++k) {
          const int nx = p.x + dx[k];
          const int ny = p.y + dy[k];
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const std::size_t nidx = static_cast<std::size_t>(ny) * w + nx;
          if (mask.at(nx, ny) == PixelClass::Character && label[nidx] < 0) {
            label[nidx] = id;
            stack.push_back(Pixel{nx, ny});
          }
        }
      }
    }
  }

  if (components.empty()) {
    throw ValidationError("mask contains no Character pixels");
  }

  std::vector<Box> boxes(components.size());
  for (std::size_t i = 0; i < components.size(); ++i) {
    boxes[i] = detail::bounding_box(components[i]);
  }

  // Merge over the original component boxes; transitivity comes from the
  // union-find, not from re-dilating merged boxes.
  detail::UnionFind uf(components.size());
  if (merge_gap > 0) {
    for (std::size_t i = 0; i < components.size(); ++i) {
      const Box bi = boxes[i].dilated(merge_gap);
      for (std::size_t j = i + 1; j < components.size(); ++j) {
        if (bi.intersects(boxes[j].dilated(merge_gap))) {
          uf.unite(static_cast<int>(i), static_cast<int>(j));
        }
      }
    }
  }

  std::vector<std::vector<Pixel>> merged(components.size());
  for (std::size_t i = 0; i < components.size(); ++i) {
    auto& target = merged[uf.find(static_cast<int>(i))];
    target.insert(target.end(), components[i].begin(), components[i].end());
  }

  std::vector<CharRegion> regions;
  for (auto& pixels : merged) {
    if (pixels.empty()) continue;
    detail::sort_pixels(pixels);
    CharRegion region;
    region.box = detail::bounding_box(pixels);
    region.pad = pad;
    region.member_pixels = std::move(pixels);
    regions.push_back(std::move(region));
  }

  std::stable_sort(regions.begin(), regions.end(),
                   [](const CharRegion& a, const CharRegion& b) {
                     return a.box.y != b.box.y ? a.box.y < b.box.y
                                               : a.box.x < b.box.x;
                   });
  return regions;
}

/// Region sidecar: one `x y w h` line per region, ASCII decimal. Supplied
/// regions override connected-component extraction; member pixels are the
/// Character pixels inside each box.
inline std::vector<CharRegion> parse_region_sidecar(std::istream& in,
                                                    const PixelClassMask& mask,
                                                    int pad = 2) {
  std::vector<CharRegion> regions;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    Box box;
    std::string extra;
    if (!(fields >> box.x >> box.y >> box.w >> box.h) || (fields >> extra)) {
      throw ValidationError("region sidecar line " + std::to_string(line_no) +
                            ": expected 'x y w h'");
    }
    if (box.w < 1 || box.h < 1) {
      throw ValidationError("region sidecar line " + std::to_string(line_no) +
                            ": empty box");
    }
    if (box.x < 0 || box.y < 0 || box.right() > mask.width() ||
        box.bottom() > mask.height()) {
      throw ValidationError("region sidecar line " + std::to_string(line_no) +
                            ": box outside image bounds");
    }
    CharRegion region;
    region.box = box;
    region.pad = pad;
    for (int y = box.y; y < box.bottom(); ++y) {
      for (int x = box.x; x < box.right(); ++x) {
        if (mask.at(x, y) == PixelClass::Character) {
          region.member_pixels.push_back(Pixel{x, y});
        }
      }
    }
    regions.push_back(std::move(region));
  }
  std::stable_sort(regions.begin(), regions.end(),
                   [](const CharRegion& a, const CharRegion& b) {
                     return a.box.y != b.box.y ? a.box.y < b.box.y
                                               : a.box.x < b.box.x;
                   });
  return regions;
}

inline std::vector<CharRegion> load_region_sidecar(const std::string& path,
                                                   const PixelClassMask& mask,
                                                   int pad = 2) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open file");
  return parse_region_sidecar(in, mask, pad);
}

}  // namespace ocraudit

#endif  // OCRAUDIT_REGIONS_HPP
