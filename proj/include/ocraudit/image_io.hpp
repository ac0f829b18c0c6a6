#ifndef OCRAUDIT_IMAGE_IO_HPP
#define OCRAUDIT_IMAGE_IO_HPP

#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "ocraudit/image.hpp"

#ifdef OCRAUDIT_HAS_PNG
#include <png.h>
#endif

namespace ocraudit {

namespace detail {

// PNM header token reader: skips whitespace and '#' comment lines.
inline std::string pnm_token(std::istream& in, const std::string& path) {
  std::string token;
  int ch = in.get();
  for (;;) {
    if (ch == EOF) throw IoError(path + ": truncated PNM header");
    if (std::isspace(ch)) {
      ch = in.get();
    } else if (ch == '#') {
      while (ch != '\n' && ch != EOF) ch = in.get();
    } else {
      break;
    }
  }
  while (ch != EOF && !std::isspace(ch)) {
    token.push_back(static_cast<char>(ch));
    ch = in.get();
  }
  return token;
}

inline int pnm_int(std::istream& in, const std::string& path,
                   const char* what) {
  const std::string token = pnm_token(in, path);
  try {
    std::size_t used = 0;
    const int value = std::stoi(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return value;
  } catch (const std::exception&) {
    throw IoError(path + ": malformed PNM " + what + " '" + token + "'");
  }
}

inline std::vector<std::uint8_t> decode_pgm_p5(std::istream& in,
                                               const std::string& path,
                                               int& width, int& height) {
  const std::string magic = pnm_token(in, path);
  if (magic != "P5") {
    throw IoError(path + ": unsupported format (expected binary PGM 'P5', got '" +
                  magic + "')");
  }
  width = pnm_int(in, path, "width");
  height = pnm_int(in, path, "height");
  const int maxval = pnm_int(in, path, "maxval");
  if (width < 1 || height < 1) {
    throw ValidationError(path + ": zero-dimension image");
  }
  if (maxval != 255) {
    throw IoError(path + ": unsupported maxval " + std::to_string(maxval) +
                  " (only 255 is supported)");
  }
  // The single whitespace byte after maxval was already consumed by the
  // token reader.
  std::vector<std::uint8_t> data(static_cast<std::size_t>(width) * height);
  in.read(reinterpret_cast<char*>(data.data()),
          static_cast<std::streamsize>(data.size()));
  if (static_cast<std::size_t>(in.gcount()) != data.size()) {
    throw IoError(path + ": truncated pixel data");
  }
  return data;
}

inline bool has_png_signature(const unsigned char* bytes, std::size_t n) {
  static const unsigned char sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (n < 8) return false;
  for (int i = 0; i < 8; ++i) {
    if (bytes[i] != sig[i]) return false;
  }
  return true;
}

#ifdef OCRAUDIT_HAS_PNG
inline GrayImage decode_png(const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "rb");
  if (!fp) throw IoError(path + ": cannot open file");

  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (png) png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw IoError(path + ": PNG decoder initialization failed");
  }

  std::vector<std::uint8_t> raw;
  std::vector<png_bytep> row_ptrs;
  int width = 0;
  int height = 0;
  int color_type = 0;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw IoError(path + ": corrupt PNG stream");
  }

  png_init_io(png, fp);
  png_read_info(png, info);

  width = static_cast<int>(png_get_image_width(png, info));
  height = static_cast<int>(png_get_image_height(png, info));
  color_type = png_get_color_type(png, info);
  const int bit_depth = png_get_bit_depth(png, info);

  if (bit_depth != 8 ||
      (color_type != PNG_COLOR_TYPE_GRAY && color_type != PNG_COLOR_TYPE_RGB)) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw IoError(path + ": unsupported PNG (only 8-bit grayscale or RGB)");
  }
  if (width < 1 || height < 1) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw ValidationError(path + ": zero-dimension image");
  }

  const int channels = color_type == PNG_COLOR_TYPE_RGB ? 3 : 1;
  raw.resize(static_cast<std::size_t>(width) * height * channels);
  row_ptrs.resize(height);
  for (int y = 0; y < height; ++y) {
    row_ptrs[y] = raw.data() + static_cast<std::size_t>(y) * width * channels;
  }
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  std::fclose(fp);

  if (channels == 1) {
    return GrayImage(width, height, std::move(raw));
  }
  std::vector<std::uint8_t> gray(static_cast<std::size_t>(width) * height);
  for (std::size_t i = 0; i < gray.size(); ++i) {
    gray[i] = luma(raw[3 * i], raw[3 * i + 1], raw[3 * i + 2]);
  }
  return GrayImage(width, height, std::move(gray));
}
#endif  // OCRAUDIT_HAS_PNG

}  // namespace detail

/// Decodes a document image. Binary PGM (P5, maxval 255) always; 8-bit
/// grayscale or RGB PNG when built with libpng. RGB collapses to gray via
/// `luma`.
inline GrayImage load_gray_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open file");

  unsigned char head[8] = {0};
  in.read(reinterpret_cast<char*>(head), sizeof(head));
  const std::size_t got = static_cast<std::size_t>(in.gcount());
  in.clear();
  in.seekg(0);

  if (detail::has_png_signature(head, got)) {
#ifdef OCRAUDIT_HAS_PNG
    in.close();
    return detail::decode_png(path);
#else
    throw IoError(path + ": unsupported format (PNG support not built)");
#endif
  }

  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data = detail::decode_pgm_p5(in, path, width, height);
  return GrayImage(width, height, std::move(data));
}

/// Decodes a ground-truth mask (binary PGM): 0=Character, 255=Background,
/// 128=Ignore. Any other byte is illegal, and the dimensions must match the
/// paired image.
inline PixelClassMask load_mask(const std::string& path,
                                const GrayImage& image) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open file");

  int width = 0;
  int height = 0;
  const std::vector<std::uint8_t> bytes =
      detail::decode_pgm_p5(in, path, width, height);
  if (width != image.width() || height != image.height()) {
    std::ostringstream msg;
    msg << path << ": mask dimensions " << width << "x" << height
        << " do not match image " << image.width() << "x" << image.height();
    throw ValidationError(msg.str());
  }

  std::vector<PixelClass> labels(bytes.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    switch (bytes[i]) {
      case 0:
        labels[i] = PixelClass::Character;
        break;
      case 255:
        labels[i] = PixelClass::Background;
        break;
      case 128:
        labels[i] = PixelClass::Ignore;
        break;
      default:
        throw ValidationError(path + ": illegal mask value " +
                              std::to_string(bytes[i]) +
                              " (expected 0, 128 or 255)");
    }
  }
  return PixelClassMask(width, height, std::move(labels));
}

inline void save_pgm(const GrayImage& image, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path + ": cannot open file for writing");
  out << "P5\n" << image.width() << " " << image.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.data().data()),
            static_cast<std::streamsize>(image.data().size()));
  if (!out) throw IoError(path + ": write failed");
}

inline void save_mask(const PixelClassMask& mask, const std::string& path) {
  std::vector<std::uint8_t> bytes(mask.labels().size());
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    switch (mask.labels()[i]) {
      case PixelClass::Character:
        bytes[i] = 0;
        break;
      case PixelClass::Background:
        bytes[i] = 255;
        break;
      case PixelClass::Ignore:
        bytes[i] = 128;
        break;
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path + ": cannot open file for writing");
  out << "P5\n" << mask.width() << " " << mask.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError(path + ": write failed");
}

}  // namespace ocraudit

#endif  // OCRAUDIT_IMAGE_IO_HPP
