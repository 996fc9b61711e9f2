/*
 * Copyright 2026 The Recess Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cerrno>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <memory>
#include <string>

#include "recess/dataset_io.hpp"
#include "recess/error.hpp"

namespace recess {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr file(std::fopen(path.c_str(), mode));
  if (!file) {
    throw IoError("cannot open '" + path.string() + "': " +
                  std::strerror(errno));
  }
  return file;
}

// libpng reports errors through longjmp; the message is captured here and
// rethrown as an exception once control is back in C++ frames.
struct PngErrorSink {
  std::string message;
};

void on_png_error(png_structp png, png_const_charp msg) {
  auto* sink = static_cast<PngErrorSink*>(png_get_error_ptr(png));
  if (sink != nullptr) sink->message = msg;
  png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

std::string color_type_name(int color_type) {
  switch (color_type) {
    case PNG_COLOR_TYPE_PALETTE: return "palette color";
    case PNG_COLOR_TYPE_GRAY_ALPHA: return "grayscale+alpha";
    case PNG_COLOR_TYPE_RGB_ALPHA: return "RGBA alpha channel";
    default: return "color type " + std::to_string(color_type);
  }
}

// The guarded_* helpers own the setjmp frames and keep no C++ objects with
// destructors in scope, so a longjmp out of libpng is well defined.
bool guarded_read_info(png_structp png, png_infop info, std::FILE* file) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_init_io(png, file);
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  return true;
}

bool guarded_read_image(png_structp png, png_infop info, png_bytepp rows) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_set_interlace_handling(png);
  png_read_update_info(png, info);
  png_read_image(png, rows);
  png_read_end(png, nullptr);
  return true;
}

bool guarded_write(png_structp png, png_infop info, std::FILE* file,
                   png_uint_32 width, png_uint_32 height, int color_type,
                   png_bytepp rows) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_init_io(png, file);
  png_set_IHDR(png, info, width, height, 8, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows);
  png_write_end(png, nullptr);
  return true;
}

}  // namespace

std::uint8_t quantize_byte(double pixel) {
  const double scaled = std::round(pixel * 255.0);  // half away from zero
  return static_cast<std::uint8_t>(std::clamp(scaled, 0.0, 255.0));
}

Image quantize(const Image& image) {
  std::vector<double> values(image.pixels().size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = quantize_byte(image.pixels()[i]) / 255.0;
  }
  return Image(image.shape(), std::move(values));
}

Image load_png(const std::filesystem::path& path) {
  FilePtr file = open_file(path, "rb");
  png_byte signature[8];
  if (std::fread(signature, 1, 8, file.get()) != 8 ||
      png_sig_cmp(signature, 0, 8) != 0) {
    throw FormatError("'" + path.string() + "' is not a PNG file");
  }

  PngErrorSink sink;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &sink,
                                           on_png_error, on_png_warning);
  if (png == nullptr) throw IoError("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("png_create_info_struct failed");
  }
  auto fail = [&](const std::string& what) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("cannot decode '" + path.string() + "': " + what);
  };

  if (!guarded_read_info(png, info, file.get())) fail(sink.message);
  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);

  std::string unsupported;
  if (color_type != PNG_COLOR_TYPE_GRAY && color_type != PNG_COLOR_TYPE_RGB) {
    unsupported = color_type_name(color_type);
  } else if (bit_depth != 8) {
    unsupported = std::to_string(bit_depth) + "-bit depth";
  } else if (png_get_valid(png, info, PNG_INFO_tRNS)) {
    unsupported = "tRNS transparency";
  }
  if (!unsupported.empty()) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("unsupported PNG feature in '" + path.string() +
                      "': " + unsupported);
  }

  const Shape shape{height, width,
                    color_type == PNG_COLOR_TYPE_RGB ? std::size_t{3}
                                                     : std::size_t{1}};
  const std::size_t row_bytes = shape.width * shape.channels;
  std::vector<png_byte> bytes(row_bytes * height);
  std::vector<png_bytep> rows(height);
  for (png_uint_32 y = 0; y < height; ++y) rows[y] = bytes.data() + y * row_bytes;
  if (!guarded_read_image(png, info, rows.data())) fail(sink.message);
  png_destroy_read_struct(&png, &info, nullptr);

  std::vector<double> pixels(shape.size());
  for (std::size_t i = 0; i < pixels.size(); ++i) pixels[i] = bytes[i] / 255.0;
  return Image(shape, std::move(pixels));
}

void save_png(const Image& image, const std::filesystem::path& path) {
  std::vector<png_byte> bytes(image.pixels().size());
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    bytes[i] = quantize_byte(image.pixels()[i]);
  }
  FilePtr file = open_file(path, "wb");

  PngErrorSink sink;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &sink,
                                            on_png_error, on_png_warning);
  if (png == nullptr) throw IoError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("png_create_info_struct failed");
  }
  const std::size_t row_bytes = image.width() * image.channels();
  std::vector<png_bytep> rows(image.height());
  for (std::size_t y = 0; y < image.height(); ++y) {
    rows[y] = bytes.data() + y * row_bytes;
  }
  const bool ok = guarded_write(png, info, file.get(),
                                static_cast<png_uint_32>(image.width()),
                                static_cast<png_uint_32>(image.height()),
                                image.channels() == 3 ? PNG_COLOR_TYPE_RGB
                                                      : PNG_COLOR_TYPE_GRAY,
                                rows.data());
  png_destroy_write_struct(&png, &info);
  if (!ok) throw IoError("cannot write '" + path.string() + "': " + sink.message);
  if (std::fflush(file.get()) != 0) {
    throw IoError("cannot flush '" + path.string() + "'");
  }
}

}  // namespace recess
