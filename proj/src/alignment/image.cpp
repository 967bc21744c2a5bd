// Copyright 2026 The preseg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "preseg/alignment/image.hpp"

#include "preseg/common/error.hpp"
#include "preseg/data/io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstring>

namespace preseg::alignment
{

namespace
{

struct ReadCursor
{
  std::span<const std::uint8_t> bytes;
  std::size_t offset{};
};

void pngRead(png_structp png, png_bytep out, png_size_t n)
{
  auto * cur = static_cast<ReadCursor *>(png_get_io_ptr(png));
  if (cur->offset + n > cur->bytes.size()) {
    png_longjmp(png, 1);
  }
  std::memcpy(out, cur->bytes.data() + cur->offset, n);
  cur->offset += n;
}

void pngWrite(png_structp png, png_bytep data, png_size_t n)
{
  auto * out = static_cast<std::vector<std::uint8_t> *>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + n);
}

void pngFlush(png_structp) {}

[[noreturn]] void pngFail(png_structp png, png_const_charp)
{
  png_longjmp(png, 1);
}

void pngWarn(png_structp, png_const_charp) {}

}  // namespace

GrayImage toGray(const RgbImage & rgb)
{
  GrayImage g(rgb.width, rgb.height);
  for (std::size_t i = 0; i < g.pixels.size(); ++i) {
    const std::uint8_t * p = &rgb.pixels[i * 3];
    g.pixels[i] = (0.299f * p[0] + 0.587f * p[1] + 0.114f * p[2]) / 255.0f;
  }
  return g;
}

RgbImage toRgb(const GrayImage & gray)
{
  RgbImage out(gray.width, gray.height);
  for (std::size_t i = 0; i < gray.pixels.size(); ++i) {
    const auto v = static_cast<std::uint8_t>(std::lround(std::clamp(gray.pixels[i], 0.0f, 1.0f) * 255.0f));
    out.pixels[i * 3] = out.pixels[i * 3 + 1] = out.pixels[i * 3 + 2] = v;
  }
  return out;
}

GrayImage centerCrop(const GrayImage & img, int width, int height)
{
  if (img.width < width || img.height < height) {
    return {};
  }
  GrayImage out(width, height);
  const int x0 = (img.width - width) / 2;
  const int y0 = (img.height - height) / 2;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      out.at(x, y) = img.at(x0 + x, y0 + y);
    }
  }
  return out;
}

std::vector<std::uint8_t> encodePng(const RgbImage & img)
{
  std::vector<std::uint8_t> out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, pngFail, pngWarn);
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::kIo, "png encode failed");
  }
  {
    png_set_write_fn(png, &out, pngWrite, pngFlush);
    png_set_IHDR(
      png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height), 8,
      PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png, 3);
    png_write_info(png, info);
    for (int y = 0; y < img.height; ++y) {
      png_write_row(png, const_cast<png_bytep>(img.at(0, y)));
    }
    png_write_end(png, nullptr);
  }
  png_destroy_write_struct(&png, &info);
  return out;
}

RgbImage decodePng(std::span<const std::uint8_t> bytes)
{
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    throw Error(ErrorCode::kMalformedFile, "not a png stream");
  }
  ReadCursor cursor{bytes, 0};
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, pngFail, pngWarn);
  png_infop info = png_create_info_struct(png);
  RgbImage img;
  std::vector<png_bytep> rows;
  bool bad_layout = false;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::kMalformedFile, "corrupt png stream");
  }
  {
    png_set_read_fn(png, &cursor, pngRead);
    png_read_info(png, info);
    png_set_strip_16(png);
    png_set_palette_to_rgb(png);
    png_set_expand_gray_1_2_4_to_8(png);
    png_set_gray_to_rgb(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);
    img = RgbImage(static_cast<int>(png_get_image_width(png, info)), static_cast<int>(png_get_image_height(png, info)));
    if (png_get_rowbytes(png, info) != static_cast<std::size_t>(img.width) * 3) {
      bad_layout = true;
    } else {
      rows.resize(static_cast<std::size_t>(img.height));
      for (int y = 0; y < img.height; ++y) {
        rows[static_cast<std::size_t>(y)] = img.at(0, y);
      }
      png_read_image(png, rows.data());
    }
  }
  png_destroy_read_struct(&png, &info, nullptr);
  if (bad_layout) {
    throw Error(ErrorCode::kMalformedFile, "unsupported png layout");
  }
  return img;
}

void writePng(const RgbImage & img, const std::filesystem::path & path)
{
  const auto bytes = encodePng(img);
  data::writeFileAtomic(path, std::as_bytes(std::span<const std::uint8_t>(bytes)));
}

RgbImage readPng(const std::filesystem::path & path)
{
  const auto bytes = data::readBytes(path);
  return decodePng(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t *>(bytes.data()), bytes.size()));
}

}  // namespace preseg::alignment
