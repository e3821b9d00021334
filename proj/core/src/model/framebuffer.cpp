#include "rfbkit/model/framebuffer.hpp"

#include <algorithm>

#include "rfbkit/model/error.hpp"

namespace rfbkit {

Framebuffer::Framebuffer(int width, int height, PixelFormat format, Pixel fill)
    : width_(width), height_(height), format_(format) {
  if (width < 1 || height < 1 || width > 0xFFFF || height > 0xFFFF) {
    throw RangeError("framebuffer dimensions must be in 1..65535");
  }
  format_.validate();
  if (fill > format_.max_value()) throw RangeError("fill value does not fit the pixel format");
  pixels_.assign(static_cast<std::size_t>(width) * height, fill);
}

void Framebuffer::fill(const Rect& r, Pixel value) {
  const Rect c = r.intersect(bounds());
  for (int y = c.y; y < c.bottom(); ++y) {
    auto line = row(y);
    std::fill(line.begin() + c.x, line.begin() + c.right(), value);
  }
}

void Framebuffer::copy_from(const Framebuffer& src, const Rect& r) {
  if (src.width_ != width_ || src.height_ != height_) {
    throw ShapeError("copy_from needs framebuffers of equal size");
  }
  const Rect c = r.intersect(bounds());
  for (int y = c.y; y < c.bottom(); ++y) {
    auto s = src.row(y);
    std::copy(s.begin() + c.x, s.begin() + c.right(), row(y).begin() + c.x);
  }
}

Framebuffer Framebuffer::converted(const PixelFormat& format) const {
  Framebuffer out(width_, height_, format);
  if (format == format_) {
    out.pixels_ = pixels_;
    return out;
  }
  std::transform(pixels_.begin(), pixels_.end(), out.pixels_.begin(),
                 [&](Pixel p) { return translate_pixel(p, format_, format); });
  return out;
}

bool Framebuffer::region_equals(const Framebuffer& other, const Rect& r) const {
  const Rect c = r.intersect(bounds()).intersect(other.bounds());
  for (int y = c.y; y < c.bottom(); ++y) {
    auto a = row(y);
    auto b = other.row(y);
    if (!std::equal(a.begin() + c.x, a.begin() + c.right(), b.begin() + c.x)) return false;
  }
  return true;
}

std::optional<PixelMismatch> first_difference(const Framebuffer& expected,
                                              const Framebuffer& actual) {
  if (expected.width() != actual.width() || expected.height() != actual.height()) {
    throw ShapeError("framebuffers differ in size");
  }
  for (int y = 0; y < expected.height(); ++y) {
    auto a = expected.row(y);
    auto b = actual.row(y);
    auto [ia, ib] = std::mismatch(a.begin(), a.end(), b.begin());
    if (ia != a.end()) {
      return PixelMismatch{static_cast<int>(ia - a.begin()), y, *ia, *ib};
    }
  }
  return std::nullopt;
}

}  // namespace rfbkit
