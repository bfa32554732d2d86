#include "ricegrade/image_io.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "ricegrade/imgproc.hpp"

namespace ricegrade {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct PngRead {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngRead() { png_destroy_read_struct(&png, &info, nullptr); }
};

struct PngWrite {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWrite() { png_destroy_write_struct(&png, &info); }
};

LoadedImage read_png(const std::string& path, double calibration) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw std::runtime_error("cannot open image: " + path);

  PngRead ctx;
  ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                   nullptr);
  if (!ctx.png) throw std::runtime_error("png_create_read_struct failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw std::runtime_error("png_create_info_struct failed");
  if (setjmp(png_jmpbuf(ctx.png))) {
    throw std::runtime_error("failed to decode PNG: " + path);
  }
  png_init_io(ctx.png, file.get());
  png_read_info(ctx.png, ctx.info);

  const png_uint_32 width = png_get_image_width(ctx.png, ctx.info);
  const png_uint_32 height = png_get_image_height(ctx.png, ctx.info);
  const int color_type = png_get_color_type(ctx.png, ctx.info);
  const int bit_depth = png_get_bit_depth(ctx.png, ctx.info);

  if (bit_depth == 16) png_set_scale_16(ctx.png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(ctx.png);
  }
  if (png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS)) {
    png_set_tRNS_to_alpha(ctx.png);
  }
  png_set_strip_alpha(ctx.png);
  png_read_update_info(ctx.png, ctx.info);

  const int channels = png_get_channels(ctx.png, ctx.info);
  if (channels != 1 && channels != 3) {
    throw std::runtime_error("unsupported PNG channel count in " + path);
  }

  std::vector<std::uint8_t> raw(static_cast<std::size_t>(width) * height *
                                channels);
  std::vector<png_bytep> rows(height);
  for (png_uint_32 y = 0; y < height; ++y) {
    rows[y] = raw.data() + static_cast<std::size_t>(y) * width * channels;
  }
  png_read_image(ctx.png, rows.data());
  png_read_end(ctx.png, nullptr);

  LoadedImage out;
  if (channels == 1) {
    out.is_gray = true;
    out.gray = GrayImage(static_cast<int>(width), static_cast<int>(height), 0,
                         calibration);
    out.gray.pixels = std::move(raw);
  } else {
    out.is_gray = false;
    out.rgb = RgbImage(static_cast<int>(width), static_cast<int>(height));
    out.rgb.pixels = std::move(raw);
  }
  return out;
}

void skip_pgm_space(std::istream& in) {
  for (;;) {
    const int ch = in.peek();
    if (ch == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(ch)) {
      in.get();
    } else {
      return;
    }
  }
}

}  // namespace

GrayImage read_pgm(const std::string& path, double calibration) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open image: " + path);
  std::string magic;
  in >> magic;
  if (magic != "P5" && magic != "P2") {
    throw std::runtime_error("not a PGM file: " + path);
  }
  skip_pgm_space(in);
  int width = 0, height = 0, maxval = 0;
  in >> width;
  skip_pgm_space(in);
  in >> height;
  skip_pgm_space(in);
  in >> maxval;
  if (!in || width <= 0 || height <= 0 || maxval <= 0 || maxval > 255) {
    throw std::runtime_error("bad PGM header in " + path);
  }
  GrayImage img(width, height, 0, calibration);
  if (magic == "P5") {
    in.get();  // single whitespace after maxval
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size())) {
      throw std::runtime_error("truncated PGM data in " + path);
    }
  } else {
    for (auto& p : img.pixels) {
      int v;
      in >> v;
      if (!in || v < 0 || v > maxval) {
        throw std::runtime_error("bad PGM sample in " + path);
      }
      p = static_cast<std::uint8_t>(v);
    }
  }
  return img;
}

void write_pgm(const std::string& path, const GrayImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write image: " + path);
  out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
}

LoadedImage read_image(const std::string& path, double calibration) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw std::runtime_error("cannot open image: " + path);
  unsigned char magic[2] = {0, 0};
  probe.read(reinterpret_cast<char*>(magic), 2);
  probe.close();
  if (magic[0] == 0x89 && magic[1] == 'P') {
    return read_png(path, calibration);
  }
  if (magic[0] == 'P' && (magic[1] == '5' || magic[1] == '2')) {
    LoadedImage out;
    out.is_gray = true;
    out.gray = read_pgm(path, calibration);
    return out;
  }
  throw std::runtime_error("unrecognized image format: " + path);
}

GrayImage read_gray(const std::string& path, double calibration) {
  LoadedImage loaded = read_image(path, calibration);
  if (loaded.is_gray) return std::move(loaded.gray);
  return to_grayscale(loaded.rgb, calibration);
}

namespace {

void write_png_impl(const std::string& path, int width, int height,
                    int color_type, int channels, const std::uint8_t* data) {
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw std::runtime_error("cannot write image: " + path);

  PngWrite ctx;
  ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                    nullptr);
  if (!ctx.png) throw std::runtime_error("png_create_write_struct failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw std::runtime_error("png_create_info_struct failed");
  if (setjmp(png_jmpbuf(ctx.png))) {
    throw std::runtime_error("failed to encode PNG: " + path);
  }
  png_init_io(ctx.png, file.get());
  png_set_IHDR(ctx.png, ctx.info, width, height, 8, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(ctx.png, ctx.info);
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y) {
    rows[y] = const_cast<png_bytep>(data) +
              static_cast<std::size_t>(y) * width * channels;
  }
  png_write_image(ctx.png, rows.data());
  png_write_end(ctx.png, nullptr);
}

}  // namespace

void write_png(const std::string& path, const GrayImage& img) {
  write_png_impl(path, img.width, img.height, PNG_COLOR_TYPE_GRAY, 1,
                 img.pixels.data());
}

void write_png(const std::string& path, const RgbImage& img) {
  write_png_impl(path, img.width, img.height, PNG_COLOR_TYPE_RGB, 3,
                 img.pixels.data());
}

}  // namespace ricegrade
