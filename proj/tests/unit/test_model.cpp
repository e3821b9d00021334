#include <random>
#include <set>
#include <thread>

#include "doctest.h"
#include "rfbkit/model/clock.hpp"
#include "rfbkit/model/encoding.hpp"
#include "rfbkit/model/error.hpp"
#include "rfbkit/model/framebuffer.hpp"
#include "rfbkit/model/metrics.hpp"
#include "rfbkit/model/pixel_format.hpp"
#include "rfbkit/model/region.hpp"

using namespace rfbkit;

namespace {

PixelFormat fmt32(bool big_endian) {
  PixelFormat f;
  f.big_endian = big_endian;
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

PixelFormat fmt8() {
  PixelFormat f;
  f.bits_per_pixel = 8;
  f.depth = 8;
  f.red_max = 7;
  f.green_max = 7;
  f.blue_max = 3;
  f.red_shift = 0;
  f.green_shift = 3;
  f.blue_shift = 6;
  return f;
}

std::vector<std::uint8_t> bytes(std::initializer_list<int> v) {
  std::vector<std::uint8_t> out;
  for (int b : v) out.push_back(static_cast<std::uint8_t>(b));
  return out;
}

// Brute-force coverage bitmap.
std::vector<bool> coverage(std::span<const Rect> rects, int w, int h) {
  std::vector<bool> bits(static_cast<std::size_t>(w * h));
  for (const Rect& r : rects)
    for (int y = r.y; y < r.bottom(); ++y)
      for (int x = r.x; x < r.right(); ++x) bits[static_cast<std::size_t>(y * w + x)] = true;
  return bits;
}

bool pairwise_disjoint(const std::vector<Rect>& rects) {
  for (std::size_t i = 0; i < rects.size(); ++i)
    for (std::size_t j = i + 1; j < rects.size(); ++j)
      if (!rects[i].intersect(rects[j]).empty()) return false;
  return true;
}

}  // namespace

TEST_CASE("pixel_bytes follows the byte order") {
  CHECK(pixel_bytes(0x000000FF, fmt32(true)) == bytes({0x00, 0x00, 0x00, 0xFF}));
  CHECK(pixel_bytes(0x000000FF, fmt32(false)) == bytes({0xFF, 0x00, 0x00, 0x00}));
  auto f8 = fmt8();
  f8.big_endian = true;
  CHECK(pixel_bytes(0xA5, f8) == bytes({0xA5}));
  f8.big_endian = false;
  CHECK(pixel_bytes(0xA5, f8) == bytes({0xA5}));
}

TEST_CASE("pixel_bytes rejects values that do not fit") {
  CHECK_THROWS_AS(pixel_bytes(0x100, fmt8()), RangeError);
  CHECK_THROWS_AS(pixel_bytes(0x10000, fmt16()), RangeError);
  CHECK_THROWS_AS(bytes_to_pixel(bytes({1, 2, 3}), fmt32(false)), FramingError);
}

TEST_CASE("pixel_bytes round-trips random values and formats") {
  std::mt19937_64 rng(7);
  const std::vector<PixelFormat> formats = {fmt32(false), fmt32(true), fmt16(), fmt8()};
  for (int i = 0; i < 2000; ++i) {
    PixelFormat f = formats[rng() % formats.size()];
    f.big_endian = rng() & 1;
    const Pixel v = static_cast<Pixel>(rng()) & f.max_value();
    const auto b = pixel_bytes(v, f);
    REQUIRE(b.size() == static_cast<std::size_t>(f.bits_per_pixel / 8));
    CHECK(bytes_to_pixel(b, f) == v);
  }
}

TEST_CASE("pixel format invariants") {
  CHECK(PixelFormat::standard().is_valid());
  CHECK(fmt16().is_valid());
  CHECK(fmt8().is_valid());
  PixelFormat bad = PixelFormat::standard();
  bad.bits_per_pixel = 24;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = PixelFormat::standard();
  bad.depth = 33;
  CHECK_FALSE(bad.is_valid());
  bad = PixelFormat::standard();
  bad.green_shift = 12;  // overlaps red
  CHECK_FALSE(bad.is_valid());
  bad = fmt16();
  bad.red_shift = 12;  // 5 bits at 12 leave the 16-bit pixel
  CHECK_FALSE(bad.is_valid());
}

TEST_CASE("make_pixel and translate_pixel") {
  const auto std_fmt = PixelFormat::standard();
  CHECK(make_pixel(0x12, 0x34, 0x56, std_fmt) == 0x123456u);
  CHECK(make_pixel(255, 255, 255, fmt16()) == 0xFFFFu);
  CHECK(translate_pixel(0xFF0000, std_fmt, fmt16()) == 0xF800u);
  CHECK(translate_pixel(0xF800, fmt16(), std_fmt) == 0xFF0000u);
}

TEST_CASE("framebuffer basics") {
  Framebuffer fb(4, 3, PixelFormat::standard(), 7);
  CHECK(fb.pixels().size() == 12);
  fb.set(1, 2, 9);
  CHECK(fb.at(1, 2) == 9u);
  fb.fill({2, 0, 10, 10}, 5);  // clipped
  CHECK(fb.at(3, 2) == 5u);
  CHECK(fb.at(1, 0) == 7u);
  CHECK_THROWS_AS(Framebuffer(0, 3), RangeError);

  Framebuffer other = fb;
  CHECK_FALSE(first_difference(fb, other).has_value());
  other.set(3, 1, 1);
  const auto d = first_difference(fb, other);
  REQUIRE(d.has_value());
  CHECK(d->x == 3);
  CHECK(d->y == 1);
  CHECK_THROWS_AS(first_difference(fb, Framebuffer(5, 3)), ShapeError);
}

TEST_CASE("region_normalize examples") {
  const Rect bounds{0, 0, 64, 64};
  CHECK(region_normalize({}, bounds).empty());

  const Rect r{3, 4, 5, 6};
  const std::vector<Rect> one = {r};
  const auto single = region_normalize(one, bounds);
  REQUIRE(single.size() == 1);
  CHECK(single.rects()[0] == r);

  const std::vector<Rect> overlap = {{0, 0, 4, 4}, {2, 0, 4, 4}};
  const auto merged = region_normalize(overlap, bounds);
  CHECK(merged.pixel_count() == 24);
  CHECK(pairwise_disjoint(merged.rects()));
  CHECK(coverage(merged.rects(), 64, 64) == coverage(overlap, 64, 64));

  const std::vector<Rect> outside = {{60, 60, 5, 5}};
  CHECK_THROWS_AS(region_normalize(outside, bounds), BoundsError);
}

TEST_CASE("region_normalize matches a brute-force coverage oracle") {
  std::mt19937_64 rng(99);
  const Rect bounds{0, 0, 64, 64};
  for (int iter = 0; iter < 300; ++iter) {
    std::vector<Rect> in;
    const int n = static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) {
      const int w = 1 + static_cast<int>(rng() % 30);
      const int h = 1 + static_cast<int>(rng() % 30);
      in.push_back({static_cast<int>(rng() % (65 - w)), static_cast<int>(rng() % (65 - h)), w, h});
    }
    const auto out = region_normalize(in, bounds);
    REQUIRE(pairwise_disjoint(out.rects()));
    REQUIRE(coverage(out.rects(), 64, 64) == coverage(in, 64, 64));
    // Deterministic order: top-to-bottom, left-to-right.
    for (std::size_t i = 1; i < out.rects().size(); ++i) {
      const Rect& a = out.rects()[i - 1];
      const Rect& b = out.rects()[i];
      REQUIRE((a.y < b.y || (a.y == b.y && a.x < b.x)));
    }
  }
}

TEST_CASE("damage region add, subtract, clip") {
  DamageRegion d;
  d.add({0, 0, 10, 10});
  d.add({5, 5, 10, 10});
  CHECK(d.pixel_count() == 175);
  CHECK(d.covers(14, 14));
  CHECK_FALSE(d.covers(14, 0));
  d.subtract({0, 0, 15, 5});
  CHECK_FALSE(d.covers(3, 3));
  CHECK(d.covers(3, 7));
  const auto c = d.clipped({0, 0, 8, 8});
  CHECK(c.bounding_box() == Rect{0, 5, 8, 3});
}

TEST_CASE("session metrics identities and the published ratios") {
  const auto hextile = SessionMetrics::from_counts("hextile", 20, 24.39, 22, 26'530'000, 5'640'000);
  CHECK(hextile.compression_ratio == doctest::Approx(4.70).epsilon(0.01 / 4.70));
  const auto zlib = SessionMetrics::from_counts("zlib", 68, 41.2, 808, 91'700'000, 8'900'000);
  CHECK(zlib.compression_ratio == doctest::Approx(10.30).epsilon(0.01 / 10.30));
  const auto raw = SessionMetrics::from_counts("raw", 8, 25, 8, 10'100'000, 10'100'000);
  CHECK(raw.compression_ratio == 1.0);
  CHECK(raw.updates_per_second == doctest::Approx(0.32));
  CHECK_NOTHROW(zlib.check_consistency());

  auto broken = zlib;
  broken.compression_ratio = 9.0;
  CHECK_THROWS_AS(broken.check_consistency(), ConsistencyError);
  CHECK(ratio_of(5, 0) == 1.0);
}

TEST_CASE("encoding ids and names") {
  CHECK(encoding_from_id(5) == Encoding::Hextile);
  CHECK_FALSE(encoding_from_id(3).has_value());
  CHECK(encoding_from_name("zlib") == Encoding::Zlib);
  CHECK(encoding_name(Encoding::CopyRect) == "copyrect");
}

TEST_CASE("rect helpers") {
  const Rect a{0, 0, 4, 4};
  CHECK(a.intersect({2, 2, 4, 4}) == Rect{2, 2, 2, 2});
  CHECK(a.intersect({4, 0, 1, 1}).empty());
  CHECK(a.bounding_union({10, 10, 1, 1}) == Rect{0, 0, 11, 11});
  CHECK(Rect{65535, 0, 1, 1}.wire_valid() == false);
  CHECK(Rect{65534, 0, 1, 1}.wire_valid());
}

TEST_CASE("manual clock releases sleepers when advanced") {
  ManualClock clock;
  std::thread t([&] { clock.sleep_until(2.0); });
  clock.advance(1.0);
  clock.set(2.5);
  t.join();
  CHECK(clock.now() == 2.5);
  CHECK(clock.is_virtual());
}
