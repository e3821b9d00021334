#include "rfbkit/codec/hextile.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "rfbkit/codec/byte_io.hpp"
#include "rfbkit/codec/raw.hpp"
#include "rfbkit/codec/rre.hpp"

namespace rfbkit::codec {
namespace {

using namespace hextile;

struct TileStats {
  Pixel background = 0;
  Pixel other = 0;  // some non-background value, meaningful when colours >= 2
  int colours = 0;
};

TileStats tile_stats(const Framebuffer& fb, const Rect& t) {
  std::array<Pixel, kTileSize * kTileSize> values;
  std::size_t n = 0;
  for (int y = t.y; y < t.bottom(); ++y) {
    auto line = fb.row(y);
    for (int x = t.x; x < t.right(); ++x) values[n++] = line[x];
  }
  std::sort(values.begin(), values.begin() + n);

  TileStats s;
  std::size_t best_run = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && values[j] == values[i]) ++j;
    ++s.colours;
    // Strictly greater keeps the lowest value on ties.
    if (j - i > best_run) {
      best_run = j - i;
      s.background = values[i];
    }
    i = j;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (values[i] != s.background) {
      s.other = values[i];
      break;
    }
  }
  return s;
}

}  // namespace

std::vector<Rect> hextile_tiles(const Rect& r) {
  std::vector<Rect> tiles;
  for (int y = r.y; y < r.bottom(); y += kTileSize) {
    const int th = std::min(kTileSize, r.bottom() - y);
    for (int x = r.x; x < r.right(); x += kTileSize) {
      tiles.push_back({x, y, std::min(kTileSize, r.right() - x), th});
    }
  }
  return tiles;
}

std::vector<std::uint8_t> encode_hextile(const Framebuffer& fb, const Rect& r) {
  check_source_rect(fb, r);
  const PixelFormat& format = fb.format();
  const std::size_t bpp = static_cast<std::size_t>(format.bytes_per_pixel());
  HextileCarry carry;
  std::vector<std::uint8_t> out;
  out.reserve(raw_size(r, format) / 4 + 64);

  for (const Rect& t : hextile_tiles(r)) {
    const TileStats stats = tile_stats(fb, t);
    const bool bg_known = carry.has_background && carry.background == stats.background;
    const std::size_t bg_cost = bg_known ? 0 : bpp;
    const std::size_t raw_cost = 1 + static_cast<std::size_t>(t.area()) * bpp;

    if (stats.colours == 1) {
      out.push_back(bg_known ? 0 : kBackgroundSpecified);
      if (!bg_known) append_pixel(out, stats.background, format);
      carry.has_background = true;
      carry.background = stats.background;
      continue;
    }

    const auto subrects = cover_foreground(fb, t, stats.background);
    const bool mono = stats.colours == 2;
    const bool fg_known = mono && carry.has_foreground && carry.foreground == stats.other;
    std::size_t cost = 1 + bg_cost + 1;
    if (mono) {
      cost += (fg_known ? 0 : bpp) + 2 * subrects.size();
    } else {
      cost += (bpp + 2) * subrects.size();
    }

    // Ties go to the subrect form.
    if (subrects.size() > 255 || cost > raw_cost) {
      out.push_back(kRaw);
      for (int y = t.y; y < t.bottom(); ++y) {
        auto line = fb.row(y);
        for (int x = t.x; x < t.right(); ++x) append_pixel(out, line[x], format);
      }
      carry = {};
      continue;
    }

    std::uint8_t mask = kAnySubrects;
    if (!bg_known) mask |= kBackgroundSpecified;
    if (mono && !fg_known) mask |= kForegroundSpecified;
    if (!mono) mask |= kSubrectsColoured;
    out.push_back(mask);
    if (!bg_known) append_pixel(out, stats.background, format);
    if (mono && !fg_known) append_pixel(out, stats.other, format);
    out.push_back(static_cast<std::uint8_t>(subrects.size()));
    for (const auto& s : subrects) {
      if (!mono) append_pixel(out, s.value, format);
      out.push_back(static_cast<std::uint8_t>(s.rect.x << 4 | s.rect.y));
      out.push_back(static_cast<std::uint8_t>((s.rect.w - 1) << 4 | (s.rect.h - 1)));
    }

    carry.has_background = true;
    carry.background = stats.background;
    if (mono) {
      carry.has_foreground = true;
      carry.foreground = stats.other;
    } else {
      carry.has_foreground = false;
    }
  }
  return out;
}

void decode_hextile(std::span<const std::uint8_t> payload, const Rect& r,
                    const PixelFormat& format, Framebuffer& dst) {
  check_target(r, format, dst);
  ByteCursor in(payload, "Hextile payload");
  HextileCarry carry;

  for (const Rect& t : hextile_tiles(r)) {
    const std::uint8_t mask = in.u8();
    if (mask & ~0x1F) throw FramingError("Hextile tile has unknown subencoding bits");

    if (mask & kRaw) {
      const auto bytes = in.bytes(raw_size(t, format));
      decode_raw(bytes, t, format, dst);
      continue;
    }

    if (mask & kBackgroundSpecified) {
      carry.background = in.pixel(format);
      carry.has_background = true;
    } else if (!carry.has_background) {
      throw FramingError("Hextile tile relies on a background that was never sent");
    }
    dst.fill(t, carry.background);

    if (mask & kForegroundSpecified) {
      carry.foreground = in.pixel(format);
      carry.has_foreground = true;
    }
    if (!(mask & kAnySubrects)) continue;

    const int count = in.u8();
    const bool coloured = mask & kSubrectsColoured;
    for (int i = 0; i < count; ++i) {
      Pixel value;
      if (coloured) {
        value = in.pixel(format);
      } else if (carry.has_foreground) {
        value = carry.foreground;
      } else {
        throw FramingError("Hextile subrect relies on a foreground that was never sent");
      }
      const std::uint8_t xy = in.u8();
      const std::uint8_t wh = in.u8();
      const Rect s{xy >> 4, xy & 0x0F, (wh >> 4) + 1, (wh & 0x0F) + 1};
      if (s.right() > t.w || s.bottom() > t.h) {
        std::ostringstream os;
        os << "Hextile subrect " << s << " escapes its " << t.w << 'x' << t.h << " tile";
        throw BoundsError(os.str());
      }
      dst.fill({t.x + s.x, t.y + s.y, s.w, s.h}, value);
    }
  }
  in.expect_end();
}

}  // namespace rfbkit::codec
