#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rfbkit/model/pixel_format.hpp"
#include "rfbkit/model/rect.hpp"

namespace rfbkit {

// Row-major grid of pixel values; one 32-bit word per pixel regardless of
// the declared bits_per_pixel.
class Framebuffer {
 public:
  Framebuffer() = default;
  Framebuffer(int width, int height, PixelFormat format = PixelFormat::standard(), Pixel fill = 0);

  int width() const { return width_; }
  int height() const { return height_; }
  const PixelFormat& format() const { return format_; }
  Rect bounds() const { return {0, 0, width_, height_}; }
  bool contains(const Rect& r) const { return !r.empty() && bounds().contains(r); }

  Pixel at(int x, int y) const { return pixels_[index(x, y)]; }
  void set(int x, int y, Pixel value) { pixels_[index(x, y)] = value; }

  std::span<Pixel> row(int y) {
    return {pixels_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
  }
  std::span<const Pixel> row(int y) const {
    return {pixels_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
  }
  std::span<const Pixel> pixels() const { return pixels_; }

  // Fills r (clipped to the framebuffer).
  void fill(const Rect& r, Pixel value);

  // Copies the pixels of r from src, which must have the same dimensions.
  void copy_from(const Framebuffer& src, const Rect& r);

  // Same geometry, every pixel translated into `format`.
  Framebuffer converted(const PixelFormat& format) const;

  // True when both hold identical pixels inside r.
  bool region_equals(const Framebuffer& other, const Rect& r) const;

  bool operator==(const Framebuffer&) const = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  PixelFormat format_;
  std::vector<Pixel> pixels_;
};

struct PixelMismatch {
  int x = 0;
  int y = 0;
  Pixel expected = 0;
  Pixel actual = 0;
};

// First differing pixel in row-major order, or nullopt when identical.
// Throws ShapeError when dimensions differ.
std::optional<PixelMismatch> first_difference(const Framebuffer& expected, const Framebuffer& actual);

}  // namespace rfbkit
