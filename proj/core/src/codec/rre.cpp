#include "rfbkit/codec/rre.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "rfbkit/codec/byte_io.hpp"
#include "rfbkit/codec/raw.hpp"

namespace rfbkit::codec {

Pixel dominant_pixel(const Framebuffer& fb, const Rect& r) {
  check_source_rect(fb, r);
  std::unordered_map<Pixel, std::int64_t> counts;
  for (int y = r.y; y < r.bottom(); ++y) {
    auto line = fb.row(y);
    for (int x = r.x; x < r.right(); ++x) ++counts[line[x]];
  }
  Pixel best = 0;
  std::int64_t best_count = -1;
  for (const auto& [value, count] : counts) {
    if (count > best_count || (count == best_count && value < best)) {
      best = value;
      best_count = count;
    }
  }
  return best;
}

std::vector<SolidRect> cover_foreground(const Framebuffer& fb, const Rect& r, Pixel background) {
  check_source_rect(fb, r);
  std::vector<SolidRect> out;
  std::vector<std::uint8_t> covered(static_cast<std::size_t>(r.area()), 0);
  auto done = [&](int x, int y) -> std::uint8_t& {
    return covered[static_cast<std::size_t>(y) * r.w + x];
  };

  for (int y = 0; y < r.h; ++y) {
    auto line = fb.row(r.y + y);
    for (int x = 0; x < r.w; ++x) {
      const Pixel c = line[r.x + x];
      if (c == background || done(x, y)) continue;

      int x_end = x + 1;
      while (x_end < r.w && line[r.x + x_end] == c && !done(x_end, y)) ++x_end;

      int y_end = y + 1;
      for (; y_end < r.h; ++y_end) {
        auto below = fb.row(r.y + y_end);
        bool same = true;
        for (int xx = x; xx < x_end && same; ++xx) {
          same = below[r.x + xx] == c && !done(xx, y_end);
        }
        if (!same) break;
      }

      for (int yy = y; yy < y_end; ++yy) {
        for (int xx = x; xx < x_end; ++xx) done(xx, yy) = 1;
      }
      out.push_back({{x, y, x_end - x, y_end - y}, c});
      x = x_end - 1;
    }
  }
  return out;
}

std::vector<std::uint8_t> encode_rre(const Framebuffer& fb, const Rect& r) {
  check_source_rect(fb, r);
  const PixelFormat& format = fb.format();
  const Pixel background = dominant_pixel(fb, r);
  const auto subrects = cover_foreground(fb, r, background);

  std::vector<std::uint8_t> out;
  out.reserve(4 + format.bytes_per_pixel() + subrects.size() * (format.bytes_per_pixel() + 8));
  put_u32(out, static_cast<std::uint32_t>(subrects.size()));
  append_pixel(out, background, format);
  for (const auto& s : subrects) {
    append_pixel(out, s.value, format);
    put_u16(out, static_cast<std::uint16_t>(s.rect.x));
    put_u16(out, static_cast<std::uint16_t>(s.rect.y));
    put_u16(out, static_cast<std::uint16_t>(s.rect.w));
    put_u16(out, static_cast<std::uint16_t>(s.rect.h));
  }
  return out;
}

void decode_rre(std::span<const std::uint8_t> payload, const Rect& r, const PixelFormat& format,
                Framebuffer& dst) {
  check_target(r, format, dst);
  ByteCursor in(payload, "RRE payload");
  const std::uint32_t count = in.u32();
  const Pixel background = in.pixel(format);
  // Reject impossible counts before touching the framebuffer.
  const std::size_t per_subrect = static_cast<std::size_t>(format.bytes_per_pixel()) + 8;
  if (in.remaining() != std::size_t{count} * per_subrect) {
    throw FramingError("RRE payload length does not match its subrectangle count");
  }
  dst.fill(r, background);
  for (std::uint32_t i = 0; i < count; ++i) {
    const Pixel value = in.pixel(format);
    const Rect s{in.u16(), in.u16(), in.u16(), in.u16()};
    if (s.empty() || s.right() > r.w || s.bottom() > r.h) {
      std::ostringstream os;
      os << "RRE subrect " << s << " escapes its " << r.w << 'x' << r.h << " rectangle";
      throw BoundsError(os.str());
    }
    dst.fill({r.x + s.x, r.y + s.y, s.w, s.h}, value);
  }
}

}  // namespace rfbkit::codec
