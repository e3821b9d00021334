#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rfbkit/codec/copyrect.hpp"
#include "rfbkit/codec/hextile.hpp"
#include "rfbkit/codec/raw.hpp"
#include "rfbkit/codec/rect_codec.hpp"
#include "rfbkit/codec/rre.hpp"
#include "rfbkit/codec/zlib.hpp"
#include "rfbkit/model/error.hpp"

using namespace rfbkit;
using namespace rfbkit::codec;

namespace {

PixelFormat big_endian_format() {
  PixelFormat f;
  f.big_endian = true;
  return f;
}

PixelFormat fmt16() {
  PixelFormat f;
  f.bits_per_pixel = 16;
  f.depth = 16;
  f.red_max = 31;
  f.green_max = 63;
  f.blue_max = 31;
  f.red_shift = 11;
  f.green_shift = 5;
  f.blue_shift = 0;
  return f;
}

std::vector<std::uint8_t> bytes(std::initializer_list<int> v) {
  std::vector<std::uint8_t> out;
  for (int b : v) out.push_back(static_cast<std::uint8_t>(b));
  return out;
}

bool region_equal(const Framebuffer& a, const Framebuffer& b, const Rect& r) { return a.region_equals(b, r); }

}  // namespace

TEST_CASE("raw layout") {
  Framebuffer fb(2, 1, big_endian_format());
  fb.set(0, 0, 0x00FF0000);
  fb.set(1, 0, 0x00000102);
  CHECK(encode_raw(fb, {0, 0, 1, 1}) == bytes({0x00, 0xFF, 0x00, 0x00}));
  auto both = encode_raw(fb, {0, 0, 2, 1});
  auto a = pixel_bytes(0x00FF0000, fb.format());
  auto b = pixel_bytes(0x00000102, fb.format());
  a.insert(a.end(), b.begin(), b.end());
  CHECK(both == a);
  CHECK_THROWS_AS(encode_raw(fb, {1, 0, 2, 1}), BoundsError);
}

TEST_CASE("raw decode") {
  Framebuffer dst(3, 3, PixelFormat::standard(), 1);
  decode_raw(bytes({4, 3, 2, 1}), {1, 1, 1, 1}, dst.format(), dst);
  CHECK(dst.at(1, 1) == 0x01020304u);
  CHECK(dst.at(0, 0) == 1u);
  CHECK_THROWS_AS(decode_raw(bytes({1, 2, 3}), {0, 0, 1, 1}, dst.format(), dst), FramingError);

  std::mt19937_64 rng(3);
  auto src = oracle::random_framebuffer(rng, 20, 10, PixelFormat::standard());
  const Rect r{2, 1, 13, 7};
  const auto payload = encode_raw(src, r);
  CHECK(payload.size() == 13u * 7u * 4u);
  Framebuffer out(20, 10);
  decode_raw(payload, r, out.format(), out);
  CHECK(region_equal(src, out, r));
  Framebuffer via_oracle(20, 10);
  oracle::raw(payload, r, via_oracle);
  CHECK(region_equal(src, via_oracle, r));
}

TEST_CASE("rre examples") {
  Framebuffer solid(10, 10, PixelFormat::standard(), 0xABCDEF);
  const auto p = encode_rre(solid, {0, 0, 10, 10});
  CHECK(p.size() == 4u + 4u);
  CHECK(p[0] == 0);
  CHECK(p[3] == 0);

  Framebuffer two(4, 2, PixelFormat::standard(), 0xA);
  two.fill({2, 0, 2, 2}, 0xB);
  // Tie between A and B (4 pixels each) goes to the lower value.
  const auto q = encode_rre(two, {0, 0, 4, 2});
  CHECK(q.size() == 4u + 2 * 4u + 8u);
  oracle::Reader in{q};
  CHECK(in.u32() == 1u);
  CHECK(in.pixel(two.format()) == 0xAu);
  CHECK(in.pixel(two.format()) == 0xBu);
  CHECK(in.u16() == 2u);
  CHECK(in.u16() == 0u);
  CHECK(in.u16() == 2u);
  CHECK(in.u16() == 2u);

  Framebuffer checker(8, 8);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) checker.set(x, y, (x + y) % 2 ? 0xFFFFFF : 0);
  const auto c = encode_rre(checker, checker.bounds());
  const std::uint32_t n = oracle::Reader{c}.u32();
  CHECK((n == 31u || n == 32u));
  Framebuffer out(8, 8, PixelFormat::standard(), 0x123);
  decode_rre(c, checker.bounds(), out.format(), out);
  CHECK(out == checker);
}

TEST_CASE("rre size formula and malformed input") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    auto fb = oracle::random_framebuffer(rng, 32, 24, PixelFormat::standard());
    const Rect r = oracle::random_rect(rng, 32, 24);
    const auto p = encode_rre(fb, r);
    const std::uint32_t n = oracle::Reader{p}.u32();
    REQUIRE(p.size() == 4u + 4u + n * (4u + 8u));
    Framebuffer out(32, 24);
    oracle::rre(p, r, out);
    REQUIRE(region_equal(fb, out, r));
  }
  Framebuffer dst(4, 4);
  // One subrect at x=3 of width 2 in a 4-wide rect.
  const auto bad = bytes({0, 0, 0, 1, 0, 0, 0, 0, 9, 0, 0, 0, 0, 3, 0, 0, 0, 2, 0, 1});
  CHECK_THROWS_AS(decode_rre(bad, {0, 0, 4, 4}, dst.format(), dst), BoundsError);
  CHECK_THROWS_AS(decode_rre(bytes({0, 0, 0, 1, 0, 0, 0, 0}), {0, 0, 4, 4}, dst.format(), dst), FramingError);
}

TEST_CASE("copyrect") {
  CHECK(encode_copyrect(0, 0) == std::array<std::uint8_t, 4>{0, 0, 0, 0});
  CHECK(encode_copyrect(16, 32) == std::array<std::uint8_t, 4>{0x00, 0x10, 0x00, 0x20});
  CHECK_THROWS_AS(encode_copyrect(70000, 0), RangeError);

  std::mt19937_64 rng(5);
  const auto base = oracle::random_framebuffer(rng, 16, 16, PixelFormat::standard());

  auto same = base;
  apply_copyrect(same, {2, 2, 8, 8}, 2, 2);
  CHECK(same == base);

  // Oracle: copy through a full snapshot.
  auto through_snapshot = [](const Framebuffer& fb, const Rect& dst, int sx, int sy) {
    Framebuffer out = fb;
    for (int y = 0; y < dst.h; ++y)
      for (int x = 0; x < dst.w; ++x) out.set(dst.x + x, dst.y + y, fb.at(sx + x, sy + y));
    return out;
  };
  for (const auto& [dst, sx, sy] : std::vector<std::tuple<Rect, int, int>>{
           {{0, 1, 16, 15}, 0, 0}, {{0, 0, 16, 15}, 0, 1}, {{1, 0, 15, 16}, 0, 0},
           {{0, 0, 15, 16}, 1, 0}, {{3, 3, 8, 8}, 5, 4}, {{8, 8, 8, 8}, 0, 0}}) {
    auto fb = base;
    apply_copyrect(fb, dst, sx, sy);
    CHECK(fb == through_snapshot(base, dst, sx, sy));
  }
  auto fb = base;
  CHECK_THROWS_AS(apply_copyrect(fb, {0, 0, 8, 8}, 10, 0), BoundsError);
}

TEST_CASE("hextile tile geometry") {
  const auto two = hextile_tiles({0, 0, 17, 16});
  REQUIRE(two.size() == 2);
  CHECK(two[1] == Rect{16, 0, 1, 16});
  const auto nine = hextile_tiles({0, 0, 40, 40});
  REQUIRE(nine.size() == 9);
  CHECK(nine[2] == Rect{32, 0, 8, 16});
  CHECK(nine[8] == Rect{32, 32, 8, 8});
}

TEST_CASE("hextile examples") {
  Framebuffer solid(32, 16, PixelFormat::standard(), 0x00112233);
  const auto one = encode_hextile(solid, {0, 0, 16, 16});
  CHECK(one == bytes({0x02, 0x33, 0x22, 0x11, 0x00}));
  // Second tile of the same colour carries the background.
  const auto two = encode_hextile(solid, {0, 0, 32, 16});
  CHECK(two == bytes({0x02, 0x33, 0x22, 0x11, 0x00, 0x00}));
  // Carry resets per rectangle.
  CHECK(encode_hextile(solid, {16, 0, 16, 16}) == one);

  Framebuffer dst(16, 16, PixelFormat::standard(), 0x55);
  // Background only, then AnySubrects with count 0.
  decode_hextile(bytes({0x0A, 1, 0, 0, 0, 0}), {0, 0, 16, 16}, dst.format(), dst);
  CHECK(dst == Framebuffer(16, 16, PixelFormat::standard(), 1));

  // Raw subencoding equals raw decoding of the tile.
  std::mt19937_64 rng(1);
  const auto src = oracle::random_framebuffer(rng, 16, 16, PixelFormat::standard());
  auto rawtile = bytes({0x01});
  const auto raw = encode_raw(src, {0, 0, 16, 16});
  rawtile.insert(rawtile.end(), raw.begin(), raw.end());
  Framebuffer a(16, 16), b(16, 16);
  decode_hextile(rawtile, {0, 0, 16, 16}, a.format(), a);
  decode_raw(raw, {0, 0, 16, 16}, b.format(), b);
  CHECK(a == b);

  // Subrect leaving a 4-wide tile.
  Framebuffer narrow(4, 4);
  CHECK_THROWS_AS(decode_hextile(bytes({0x0E, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0x30, 0x10}), {0, 0, 4, 4},
                                 narrow.format(), narrow),
                  BoundsError);
  CHECK_THROWS_AS(decode_hextile(bytes({0x02, 0, 0}), {0, 0, 4, 4}, narrow.format(), narrow), FramingError);
}

TEST_CASE("hextile size bound and reference decoder agreement") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 300; ++i) {
    const PixelFormat f = (i % 3 == 0) ? fmt16() : PixelFormat::standard();
    auto fb = oracle::random_framebuffer(rng, 64, 48, f);
    const Rect r = oracle::random_rect(rng, 64, 48);
    const auto p = encode_hextile(fb, r);
    REQUIRE(p.size() <= raw_size(r, f) + hextile_tiles(r).size());
    Framebuffer out(64, 48, f);
    oracle::hextile(p, r, out);
    REQUIRE(region_equal(fb, out, r));
  }
}

TEST_CASE("zlib stream") {
  std::mt19937_64 rng(8);
  ZlibDeflater deflater;
  oracle::Zlib reference;
  for (int i = 0; i < 50; ++i) {
    auto fb = oracle::random_framebuffer(rng, 40, 30, PixelFormat::standard());
    const Rect r = oracle::random_rect(rng, 40, 30);
    const auto p = encode_zlib(fb, r, deflater);
    Framebuffer out(40, 30);
    reference.decode(p, r, out);
    REQUIRE(region_equal(fb, out, r));
  }

  Framebuffer solid(100, 100, PixelFormat::standard(), 0x336699);
  ZlibDeflater fresh;
  const auto small = encode_zlib(solid, solid.bounds(), fresh);
  CHECK(40000.0 / static_cast<double>(small.size()) > 10.0);
}

TEST_CASE("zlib decoding depends on stream order") {
  std::mt19937_64 rng(12);
  auto fb1 = oracle::random_framebuffer(rng, 32, 32, PixelFormat::standard());
  auto fb2 = fb1;
  fb2.fill({4, 4, 8, 8}, 0x777777);
  ZlibDeflater d;
  const auto p1 = encode_zlib(fb1, fb1.bounds(), d);
  const auto p2 = encode_zlib(fb2, fb2.bounds(), d);

  ZlibInflater in_order;
  Framebuffer out(32, 32);
  decode_zlib(p1, out.bounds(), out.format(), out, in_order);
  CHECK(out == fb1);
  decode_zlib(p2, out.bounds(), out.format(), out, in_order);
  CHECK(out == fb2);

  ZlibInflater swapped;
  Framebuffer wrong(32, 32);
  bool detected = false;
  try {
    decode_zlib(p2, wrong.bounds(), wrong.format(), wrong, swapped);
    detected = wrong != fb2;
  } catch (const Error&) {
    detected = true;
  }
  CHECK(detected);

  ZlibInflater truncated;
  auto cut = p1;
  cut.resize(cut.size() - 5);
  CHECK_THROWS_AS(decode_zlib(cut, out.bounds(), out.format(), out, truncated), FramingError);
}

TEST_CASE("zlib corrupt body") {
  Framebuffer fb(8, 8, PixelFormat::standard(), 0x10);
  ZlibDeflater d;
  auto p = encode_zlib(fb, fb.bounds(), d);
  for (std::size_t i = 4; i < p.size(); ++i) p[i] = static_cast<std::uint8_t>(~p[i]);
  ZlibInflater in;
  CHECK_THROWS_AS(decode_zlib(p, fb.bounds(), fb.format(), fb, in), DecompressionError);
}

TEST_CASE("negotiate_encoding") {
  const std::set<Encoding> server = {Encoding::Raw, Encoding::RRE, Encoding::Hextile, Encoding::Zlib};
  CHECK(negotiate_encoding(std::vector<std::int32_t>{6, 5, 0}, server).encoding == Encoding::Zlib);
  CHECK(negotiate_encoding(std::vector<std::int32_t>{99}, server).encoding == Encoding::Raw);
  CHECK(negotiate_encoding(std::vector<std::int32_t>{5, 6}, {Encoding::Raw, Encoding::Zlib}).encoding ==
        Encoding::Zlib);
  CHECK(negotiate_encoding(std::vector<std::int32_t>{}, server).encoding == Encoding::Raw);
  CHECK(negotiate_encoding(std::vector<std::int32_t>{5}, server, true).strict);
}

TEST_CASE("rect encoder fallback and strict mode") {
  std::mt19937_64 rng(4);
  Framebuffer noise(16, 16);
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 16; ++x) noise.set(x, y, static_cast<Pixel>(rng()) & 0xFFFFFF);
  RectEncoder lenient({Encoding::RRE, false});
  const auto l = lenient.encode(noise, noise.bounds());
  CHECK(l.encoding() == Encoding::Raw);
  RectEncoder strict({Encoding::RRE, true});
  const auto s = strict.encode(noise, noise.bounds());
  CHECK(s.encoding() == Encoding::RRE);
  RectDecoder dec;
  Framebuffer out(16, 16);
  dec.apply(s, out);
  CHECK(out == noise);
  CHECK_THROWS_AS(RectEncoder({Encoding::CopyRect, false}).encode(noise, noise.bounds()), PreconditionError);

  RectUpdate bogus{{0, 0, 1, 1}, 3, {}};
  CHECK_THROWS_AS(dec.apply(bogus, out), ProtocolError);
}
