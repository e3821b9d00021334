#include "rfbkit/codec/corpus.hpp"

#include <random>

#include "json.hpp"
#include "rfbkit/codec/copyrect.hpp"
#include "rfbkit/codec/rect_codec.hpp"

namespace rfbkit::codec {
namespace {

using Rng = std::mt19937_64;

std::uint64_t below(Rng& rng, std::uint64_t n) { return rng() % n; }

PixelFormat pick_format(Rng& rng) {
  PixelFormat f;
  switch (below(rng, 4)) {
    case 0: break;
    case 1: f.big_endian = true; break;
    case 2:
      f.bits_per_pixel = 16;
      f.depth = 16;
      f.red_max = 31;
      f.green_max = 63;
      f.blue_max = 31;
      f.red_shift = 11;
      f.green_shift = 5;
      f.blue_shift = 0;
      break;
    default:
      f.bits_per_pixel = 8;
      f.depth = 8;
      f.red_max = 7;
      f.green_max = 7;
      f.blue_max = 3;
      f.red_shift = 0;
      f.green_shift = 3;
      f.blue_shift = 6;
      break;
  }
  return f;
}

Pixel any_pixel(Rng& rng, const PixelFormat& f) {
  return static_cast<Pixel>(rng() & f.max_value());
}

// Flat, small-palette, striped or noisy content.
Framebuffer make_content(Rng& rng, int w, int h, const PixelFormat& f) {
  Framebuffer fb(w, h, f);
  std::vector<Pixel> palette(1 + below(rng, 4));
  for (auto& p : palette) p = any_pixel(rng, f);
  const auto style = below(rng, 4);
  const int sx = 1 + static_cast<int>(below(rng, 8));
  const int sy = 1 + static_cast<int>(below(rng, 8));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      Pixel v = palette[0];
      switch (style) {
        case 0: v = any_pixel(rng, f); break;
        case 1: v = palette[below(rng, palette.size())]; break;
        case 2: v = palette[static_cast<std::size_t>(x / sx + y / sy) % palette.size()]; break;
        default: v = below(rng, 10) == 0 ? palette[below(rng, palette.size())] : palette[0]; break;
      }
      fb.set(x, y, v);
    }
  }
  return fb;
}

Rect random_rect(Rng& rng, int w, int h) {
  const int rw = 1 + static_cast<int>(below(rng, static_cast<std::uint64_t>(w)));
  const int rh = 1 + static_cast<int>(below(rng, static_cast<std::uint64_t>(h)));
  const int x = static_cast<int>(below(rng, static_cast<std::uint64_t>(w - rw + 1)));
  const int y = static_cast<int>(below(rng, static_cast<std::uint64_t>(h - rh + 1)));
  return {x, y, rw, rh};
}

std::string hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out += kDigits[b >> 4];
    out += kDigits[b & 15];
  }
  return out;
}

std::string pixels_hex(const Framebuffer& fb) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(fb.pixels().size() * static_cast<std::size_t>(fb.format().bytes_per_pixel()));
  for (Pixel p : fb.pixels()) append_pixel(bytes, p, fb.format());
  return hex(bytes);
}

}  // namespace

std::vector<CorpusCase> make_corpus(Encoding encoding, const CorpusOptions& options) {
  Rng rng(options.seed ^ (static_cast<std::uint64_t>(encoding) * 0x9E3779B97F4A7C15ull));
  std::vector<CorpusCase> out;
  out.reserve(options.count);
  for (std::size_t i = 0; i < options.count; ++i) {
    const PixelFormat f = pick_format(rng);
    const int w = 1 + static_cast<int>(below(rng, static_cast<std::uint64_t>(options.max_width)));
    const int h = 1 + static_cast<int>(below(rng, static_cast<std::uint64_t>(options.max_height)));
    CorpusCase c;
    c.name = std::string(encoding_name(encoding)) + "-" + std::to_string(i);
    c.encoding = encoding;
    c.before = make_content(rng, w, h, f);
    c.after = c.before;
    const int n = 1 + static_cast<int>(below(rng, static_cast<std::uint64_t>(options.max_rects)));

    if (encoding == Encoding::CopyRect) {
      // Sequential copies within one framebuffer; each reads the result of
      // the previous one.
      c.source = c.before;
      for (int k = 0; k < n; ++k) {
        const Rect dst = random_rect(rng, w, h);
        const int sx = static_cast<int>(below(rng, static_cast<std::uint64_t>(w - dst.w + 1)));
        const int sy = static_cast<int>(below(rng, static_cast<std::uint64_t>(h - dst.h + 1)));
        const auto payload = encode_copyrect(sx, sy);
        c.rects.push_back({dst, static_cast<std::int32_t>(Encoding::CopyRect), {payload.begin(), payload.end()}});
        const Framebuffer snapshot = c.after;
        for (int y = 0; y < dst.h; ++y)
          for (int x = 0; x < dst.w; ++x) c.after.set(dst.x + x, dst.y + y, snapshot.at(sx + x, sy + y));
      }
    } else {
      c.source = make_content(rng, w, h, f);
      RectEncoder enc({encoding, true});
      for (int k = 0; k < n; ++k) {
        const Rect r = random_rect(rng, w, h);
        c.rects.push_back(enc.encode(c.source, r));
        c.after.copy_from(c.source, r);
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::string corpus_to_json(Encoding encoding, const std::vector<CorpusCase>& cases) {
  nlohmann::ordered_json doc;
  doc["encoding"] = std::string(encoding_name(encoding));
  doc["encoding_id"] = static_cast<std::int32_t>(encoding);
  auto& list = doc["cases"] = nlohmann::ordered_json::array();
  for (const auto& c : cases) {
    const PixelFormat& f = c.before.format();
    nlohmann::ordered_json jc;
    jc["name"] = c.name;
    jc["width"] = c.before.width();
    jc["height"] = c.before.height();
    jc["format"] = {{"bits_per_pixel", f.bits_per_pixel}, {"depth", f.depth},
                    {"big_endian", f.big_endian},         {"true_color", f.true_color},
                    {"red_max", f.red_max},               {"green_max", f.green_max},
                    {"blue_max", f.blue_max},             {"red_shift", f.red_shift},
                    {"green_shift", f.green_shift},       {"blue_shift", f.blue_shift}};
    jc["before"] = pixels_hex(c.before);
    auto& rects = jc["rects"] = nlohmann::ordered_json::array();
    for (const auto& r : c.rects) {
      rects.push_back({{"x", r.rect.x},
                       {"y", r.rect.y},
                       {"w", r.rect.w},
                       {"h", r.rect.h},
                       {"encoding", r.encoding_id},
                       {"payload", hex(r.payload)}});
    }
    jc["after"] = pixels_hex(c.after);
    list.push_back(std::move(jc));
  }
  return doc.dump(1) + "\n";
}

}  // namespace rfbkit::codec
