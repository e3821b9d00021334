#pragma once
// Reference implementations used as test oracles. Written directly from the
// wire layouts, sharing no code with the library's codecs.

#include <zlib.h>

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "rfbkit/model/framebuffer.hpp"
#include "rfbkit/model/region.hpp"

namespace oracle {

using rfbkit::Framebuffer;
using rfbkit::Pixel;
using rfbkit::PixelFormat;
using rfbkit::Rect;

struct Reader {
  const std::vector<std::uint8_t>& b;
  std::size_t pos = 0;
  void need(std::size_t n) const {
    if (pos + n > b.size()) throw std::runtime_error("oracle: truncated");
  }
  std::uint32_t u8() { need(1); return b[pos++]; }
  std::uint32_t u16() { need(2); std::uint32_t v = b[pos] << 8 | b[pos + 1]; pos += 2; return v; }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = std::uint32_t(b[pos]) << 24 | b[pos + 1] << 16 | b[pos + 2] << 8 | b[pos + 3];
    pos += 4;
    return v;
  }
  Pixel pixel(const PixelFormat& f) {
    const int n = f.bits_per_pixel / 8;
    need(static_cast<std::size_t>(n));
    Pixel v = 0;
    for (int i = 0; i < n; ++i) {
      const Pixel byte = b[pos + static_cast<std::size_t>(i)];
      v |= f.big_endian ? byte << (8 * (n - 1 - i)) : byte << (8 * i);
    }
    pos += static_cast<std::size_t>(n);
    return v;
  }
  bool done() const { return pos == b.size(); }
};

inline void fill(Framebuffer& fb, int x, int y, int w, int h, Pixel v) {
  for (int j = y; j < y + h; ++j)
    for (int i = x; i < x + w; ++i) fb.set(i, j, v);
}

inline void raw(const std::vector<std::uint8_t>& p, const Rect& r, Framebuffer& fb) {
  Reader in{p};
  for (int y = r.y; y < r.bottom(); ++y)
    for (int x = r.x; x < r.right(); ++x) fb.set(x, y, in.pixel(fb.format()));
  if (!in.done()) throw std::runtime_error("oracle raw: trailing bytes");
}

inline void rre(const std::vector<std::uint8_t>& p, const Rect& r, Framebuffer& fb) {
  Reader in{p};
  const std::uint32_t n = in.u32();
  fill(fb, r.x, r.y, r.w, r.h, in.pixel(fb.format()));
  for (std::uint32_t i = 0; i < n; ++i) {
    const Pixel v = in.pixel(fb.format());
    const int x = static_cast<int>(in.u16()), y = static_cast<int>(in.u16());
    const int w = static_cast<int>(in.u16()), h = static_cast<int>(in.u16());
    if (x + w > r.w || y + h > r.h) throw std::runtime_error("oracle rre: subrect outside");
    fill(fb, r.x + x, r.y + y, w, h, v);
  }
  if (!in.done()) throw std::runtime_error("oracle rre: trailing bytes");
}

inline void hextile(const std::vector<std::uint8_t>& p, const Rect& r, Framebuffer& fb) {
  Reader in{p};
  Pixel bg = 0, fg = 0;
  for (int ty = r.y; ty < r.bottom(); ty += 16) {
    for (int tx = r.x; tx < r.right(); tx += 16) {
      const int tw = std::min(16, r.right() - tx), th = std::min(16, r.bottom() - ty);
      const std::uint32_t mask = in.u8();
      if (mask & 1) {
        for (int y = ty; y < ty + th; ++y)
          for (int x = tx; x < tx + tw; ++x) fb.set(x, y, in.pixel(fb.format()));
        continue;
      }
      if (mask & 2) bg = in.pixel(fb.format());
      fill(fb, tx, ty, tw, th, bg);
      if (mask & 4) fg = in.pixel(fb.format());
      if (mask & 8) {
        const std::uint32_t n = in.u8();
        for (std::uint32_t i = 0; i < n; ++i) {
          Pixel v = fg;
          if (mask & 16) v = in.pixel(fb.format());
          const std::uint32_t xy = in.u8(), wh = in.u8();
          const int x = xy >> 4, y = xy & 15, w = (wh >> 4) + 1, h = (wh & 15) + 1;
          if (x + w > tw || y + h > th) throw std::runtime_error("oracle hextile: subrect outside tile");
          fill(fb, tx + x, ty + y, w, h, v);
        }
      }
    }
  }
  if (!in.done()) throw std::runtime_error("oracle hextile: trailing bytes");
}

// Stateful: one inflate stream per connection.
class Zlib {
 public:
  Zlib() { if (inflateInit(&z_) != Z_OK) throw std::runtime_error("inflateInit"); }
  ~Zlib() { inflateEnd(&z_); }
  Zlib(const Zlib&) = delete;
  Zlib& operator=(const Zlib&) = delete;

  void decode(const std::vector<std::uint8_t>& p, const Rect& r, Framebuffer& fb) {
    Reader in{p};
    const std::uint32_t len = in.u32();
    if (len != p.size() - 4) throw std::runtime_error("oracle zlib: length mismatch");
    std::vector<std::uint8_t> out(static_cast<std::size_t>(r.area()) * (fb.format().bits_per_pixel / 8));
    z_.next_in = const_cast<Bytef*>(p.data() + 4);
    z_.avail_in = len;
    z_.next_out = out.data();
    z_.avail_out = static_cast<uInt>(out.size());
    const int rc = inflate(&z_, Z_SYNC_FLUSH);
    if (rc != Z_OK && rc != Z_BUF_ERROR) throw std::runtime_error("oracle zlib: inflate failed");
    if (z_.avail_out != 0 || z_.avail_in != 0) throw std::runtime_error("oracle zlib: size mismatch");
    raw(out, r, fb);
  }

 private:
  z_stream z_{};
};

// Per-pixel comparison: every differing pixel must be covered by `damage`.
inline bool damage_covers_diff(const Framebuffer& a, const Framebuffer& b, const rfbkit::DamageRegion& damage) {
  for (int y = 0; y < a.height(); ++y)
    for (int x = 0; x < a.width(); ++x)
      if (a.at(x, y) != b.at(x, y) && !damage.covers(x, y)) return false;
  return true;
}

inline Rect diff_bounds(const Framebuffer& a, const Framebuffer& b) {
  Rect box;
  for (int y = 0; y < a.height(); ++y)
    for (int x = 0; x < a.width(); ++x)
      if (a.at(x, y) != b.at(x, y)) box = box.bounding_union({x, y, 1, 1});
  return box;
}

// Framebuffer content with the mix codecs meet in practice: flat areas,
// small palettes and noise.
inline Framebuffer random_framebuffer(std::mt19937_64& rng, int w, int h, const PixelFormat& fmt) {
  Framebuffer fb(w, h, fmt);
  const Pixel maxv = fmt.max_value();
  std::uniform_int_distribution<Pixel> any(0, maxv);
  std::vector<Pixel> palette(1 + rng() % 4);
  for (auto& p : palette) p = any(rng);
  const int style = static_cast<int>(rng() % 4);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      Pixel v = palette[0];
      switch (style) {
        case 0: v = any(rng); break;
        case 1: v = palette[rng() % palette.size()]; break;
        case 2: v = palette[(x / 5 + y / 3) % palette.size()]; break;
        default: v = (rng() % 10 == 0) ? palette[rng() % palette.size()] : palette[0]; break;
      }
      fb.set(x, y, v);
    }
  }
  return fb;
}

inline Rect random_rect(std::mt19937_64& rng, int w, int h) {
  const int rw = 1 + static_cast<int>(rng() % static_cast<unsigned>(w));
  const int rh = 1 + static_cast<int>(rng() % static_cast<unsigned>(h));
  const int x = static_cast<int>(rng() % static_cast<unsigned>(w - rw + 1));
  const int y = static_cast<int>(rng() % static_cast<unsigned>(h - rh + 1));
  return {x, y, rw, rh};
}

// Sliding-window audit of a delivery log: for every window [t, t + T],
// delivered bytes <= rate * T / 8 + burst. Windows starting at each delivery
// are the tightest, so only those are checked.
struct Sent {
  double time;
  std::size_t bytes;
};
inline bool window_bound_holds(std::vector<Sent> log, double rate_bps, double burst, double* worst = nullptr) {
  std::sort(log.begin(), log.end(), [](const Sent& a, const Sent& b) { return a.time < b.time; });
  double excess = -1e300;
  for (std::size_t i = 0; i < log.size(); ++i) {
    double bytes = 0;
    for (std::size_t j = i; j < log.size(); ++j) {
      bytes += static_cast<double>(log[j].bytes);
      const double window = log[j].time - log[i].time;
      excess = std::max(excess, bytes - (rate_bps * window / 8.0 + burst));
    }
  }
  if (worst) *worst = excess;
  return excess <= 1e-6;
}

}  // namespace oracle
