#include "rfbkit/codec/raw.hpp"

#include <sstream>

#include "rfbkit/model/error.hpp"

namespace rfbkit::codec {

void check_source_rect(const Framebuffer& fb, const Rect& r) {
  if (!fb.contains(r)) {
    std::ostringstream os;
    os << "rect " << r << " is outside the " << fb.width() << 'x' << fb.height()
       << " framebuffer";
    throw BoundsError(os.str());
  }
}

void check_target(const Rect& r, const PixelFormat& format, const Framebuffer& dst) {
  if (format != dst.format()) {
    throw ShapeError("payload format " + format.describe() + " differs from target format " +
                     dst.format().describe());
  }
  check_source_rect(dst, r);
}

std::size_t raw_size(const Rect& r, const PixelFormat& format) {
  return static_cast<std::size_t>(r.area()) * format.bytes_per_pixel();
}

std::vector<std::uint8_t> encode_raw(const Framebuffer& fb, const Rect& r) {
  check_source_rect(fb, r);
  const PixelFormat& format = fb.format();
  std::vector<std::uint8_t> out;
  out.reserve(raw_size(r, format));
  for (int y = r.y; y < r.bottom(); ++y) {
    auto line = fb.row(y);
    for (int x = r.x; x < r.right(); ++x) append_pixel(out, line[x], format);
  }
  return out;
}

void decode_raw(std::span<const std::uint8_t> payload, const Rect& r, const PixelFormat& format,
                Framebuffer& dst) {
  check_target(r, format, dst);
  if (payload.size() != raw_size(r, format)) {
    throw FramingError("raw payload has " + std::to_string(payload.size()) + " bytes, expected " +
                       std::to_string(raw_size(r, format)));
  }
  const auto bpp = static_cast<std::size_t>(format.bytes_per_pixel());
  const std::uint8_t* p = payload.data();
  for (int y = r.y; y < r.bottom(); ++y) {
    auto line = dst.row(y);
    for (int x = r.x; x < r.right(); ++x, p += bpp) line[x] = read_pixel(p, format);
  }
}

}  // namespace rfbkit::codec
