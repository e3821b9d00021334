#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include "doctest.h"
#include "oracles.hpp"
#include "rfbkit/accel/link.hpp"
#include "rfbkit/accel/metrics_tap.hpp"
#include "rfbkit/accel/relay.hpp"
#include "rfbkit/accel/transcode.hpp"
#include "rfbkit/codec/copyrect.hpp"
#include "rfbkit/model/error.hpp"
#include "rfbkit/server/session.hpp"

using namespace rfbkit;
using namespace rfbkit::accel;

namespace {

std::vector<std::string> read_lines(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::filesystem::path temp_path(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove(p);
  return p;
}

struct Downstream {
  std::unique_ptr<wire::Connection> conn;
  wire::HandshakeResult hs;
  codec::RectDecoder dec;
  Framebuffer mirror;

  explicit Downstream(std::unique_ptr<wire::Connection> c) : conn(std::move(c)) {
    hs = wire::client_handshake(*conn, true);
    mirror = Framebuffer(hs.fb_width, hs.fb_height, hs.server_format);
  }
  std::vector<RectUpdate> request(bool incremental) {
    conn->write_all(wire::serialize(
        wire::FramebufferUpdateRequest{incremental, {0, 0, hs.fb_width, hs.fb_height}}));
    return wire::read_update(*conn, dec, mirror);
  }
};

}  // namespace

TEST_CASE("link config validation") {
  CHECK_NOTHROW(LinkConfig{}.validate());
  CHECK_THROWS_AS((LinkConfig{0.0, 1024, 0.0}.validate()), ConfigError);
  CHECK_THROWS_AS((LinkConfig{1e6, 0, 0.0}.validate()), ConfigError);
  CHECK_THROWS_AS((LinkConfig{1e6, 1024, -0.1}.validate()), ConfigError);
}

TEST_CASE("token bucket arithmetic") {
  const LinkConfig cfg{8e6, 64 * 1024, 0.04};
  SUBCASE("1 MB at 8 Mbit/s takes a second") {
    TokenBucket bucket(cfg, 0.0);
    CHECK(bucket.completion(0.0, 1'000'000) >= 1.0 + 0.04 - 1e-9);
  }
  SUBCASE("an empty write costs only latency") {
    TokenBucket bucket(cfg, 0.0);
    CHECK(bucket.completion(0.0, 0) == doctest::Approx(0.04));
    CHECK(bucket.completion(5.0, 0) == doctest::Approx(5.04));
  }
  SUBCASE("chunks are contiguous and bounded by the burst") {
    TokenBucket bucket(cfg, 0.0);
    const auto d = bucket.schedule(0.0, 200'000);
    std::size_t offset = 0;
    double last = 0.0;
    for (const auto& c : d) {
      CHECK(c.offset == offset);
      CHECK(c.bytes <= cfg.burst_bytes);
      CHECK(c.time >= last);
      offset += c.bytes;
      last = c.time;
    }
    CHECK(offset == 200'000);
  }
}

TEST_CASE("token bucket never exceeds the window bound") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const LinkConfig cfg{1e5 + double(rng() % 10'000'000), 512 + rng() % 100'000,
                         double(rng() % 100) / 1000.0};
    TokenBucket bucket(cfg, 0.0);
    std::vector<oracle::Sent> log;
    double now = 0.0;
    for (int i = 0; i < 60; ++i) {
      now += double(rng() % 1000) / 4000.0;
      for (const auto& d : bucket.schedule(now, rng() % 300'000)) log.push_back({d.time, d.bytes});
    }
    double worst = 0;
    REQUIRE(oracle::window_bound_holds(log, cfg.rate_bps, double(cfg.burst_bytes), &worst));
  }
}

TEST_CASE("throttle_write on a virtual clock writes everything at once") {
  ManualClock clock(3.0);
  TokenBucket bucket({8e6, 4096, 0.01}, 3.0);
  wire::BufferConnection conn({});
  std::vector<std::uint8_t> payload(100'000, 0xAB);
  const double done = throttle_write(bucket, clock, conn, payload);
  CHECK(conn.written() == payload);
  CHECK(done >= 3.0 + 0.1 + 0.01 - 1e-9);
  CHECK(clock.now() == 3.0);
}

TEST_CASE("throttle_write on a real clock paces the writes") {
  SteadyClock clock;
  ThrottledLink link({1e6, 4096, 0.0}, clock);
  wire::BufferConnection conn({});
  std::vector<std::uint8_t> payload(20'000, 1);
  const auto t0 = std::chrono::steady_clock::now();
  link.write(conn, payload);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(elapsed >= 0.15);
  CHECK(conn.written().size() == payload.size());
  CHECK(link.last_completion() >= 0.16 - 1e-9);
}

TEST_CASE("transcode examples") {
  std::mt19937_64 rng(4);
  const auto src = oracle::random_framebuffer(rng, 64, 32, PixelFormat::standard());
  codec::RectEncoder raw_enc({Encoding::Raw, true});
  codec::RectDecoder dec;
  codec::RectEncoder target({Encoding::Hextile, true});
  codec::RectDecoder target_dec;
  Framebuffer shadow(64, 32);
  Framebuffer client(64, 32);

  SUBCASE("raw tile keeps its geometry") {
    const std::vector<RectUpdate> in = {raw_enc.encode(src, {16, 16, 16, 16})};
    const auto out = transcode_update(shadow, in, dec, target);
    REQUIRE(out.size() == 1);
    CHECK(out[0].rect == Rect{16, 16, 16, 16});
    CHECK(out[0].encoding() == Encoding::Hextile);
    target_dec.apply(out[0], client);
    CHECK(client.region_equals(src, {16, 16, 16, 16}));
  }

  SUBCASE("copyrect becomes pixels of the destination") {
    const std::vector<RectUpdate> first = {raw_enc.encode(src, src.bounds())};
    for (const auto& u : transcode_update(shadow, first, dec, target)) target_dec.apply(u, client);
    const auto cr = codec::encode_copyrect(0, 0);
    const std::vector<RectUpdate> copy = {{{32, 0, 32, 32}, 1, {cr.begin(), cr.end()}}};
    const auto out = transcode_update(shadow, copy, dec, target);
    Framebuffer expected = src;
    for (int y = 0; y < 32; ++y)
      for (int x = 0; x < 32; ++x) expected.set(32 + x, y, src.at(x, y));
    CHECK(shadow == expected);
    DamageRegion covered;
    for (const auto& u : out) {
      CHECK(u.encoding() == Encoding::Hextile);
      covered.add(u.rect);
      target_dec.apply(u, client);
    }
    CHECK(covered.bounding_box() == Rect{32, 0, 32, 32});
    CHECK(client == expected);
  }

  SUBCASE("empty in, empty out") {
    CHECK(transcode_update(shadow, {}, dec, target).empty());
  }

  SUBCASE("rectangles outside the shadow are rejected") {
    const auto big = oracle::random_framebuffer(rng, 80, 40, PixelFormat::standard());
    const std::vector<RectUpdate> in = {raw_enc.encode(big, {60, 0, 20, 8})};
    CHECK_THROWS_AS(transcode_update(shadow, in, dec, target), BoundsError);
  }
}

TEST_CASE("metrics tap and csv") {
  MetricsTap tap;
  codec::RectEncoder raw_enc({Encoding::Raw, true});
  Framebuffer fb(20, 10, PixelFormat::standard(), 5);
  const std::vector<RectUpdate> rects = {raw_enc.encode(fb, {0, 0, 20, 5}), raw_enc.encode(fb, {0, 5, 20, 5})};
  tap.record(rects, fb.format());
  tap.record(rects, fb.format());
  const auto m = tap_metrics(tap, "raw", 2.0);
  CHECK(m.updates == 2);
  CHECK(m.rectangles == 4);
  CHECK(m.captured_bytes == 2 * 20 * 10 * 4);
  CHECK(m.compression_ratio == 1.0);
  CHECK(m.updates_per_second == doctest::Approx(1.0));

  CHECK(metrics_csv_header() ==
        "encoding,updates,duration_s,updates_per_s,rects,captured_bytes,compressed_bytes,ratio");
  CHECK(metrics_csv_row(m) == "raw,2,2.000,1.0000,4,1600,1600,1.0000");

  const auto path = temp_path("rfbkit_tap_test.csv");
  append_metrics_csv(path, m);
  append_metrics_csv(path, m);
  const auto lines = read_lines(path);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == metrics_csv_header());
  CHECK(lines[2] == metrics_csv_row(m));
  std::filesystem::remove(path);
}

TEST_CASE("relay re-encodes a solid upstream screen") {
  for (Encoding target : {Encoding::Raw, Encoding::RRE, Encoding::Hextile, Encoding::Zlib}) {
    CAPTURE(encoding_name(target));
    server::ScreenHub upstream_hub(Framebuffer(64, 48, PixelFormat::standard(), 0x00336699));
    auto [up_server, up_client] = wire::make_pipe();
    std::vector<std::uint8_t> pointer_bytes;
    std::mutex mu;
    server::SessionOptions up_opts;
    up_opts.on_input = [&](const wire::ClientMessage& m, std::span<const std::uint8_t> raw) {
      if (std::holds_alternative<wire::PointerEvent>(m)) {
        std::lock_guard lock(mu);
        pointer_bytes.assign(raw.begin(), raw.end());
      }
    };
    std::thread upstream([&, conn = std::move(up_server)] { server::serve_session(*conn, upstream_hub, up_opts); });

    RelayOptions opts;
    opts.target = {target, true};
    Relay relay(std::move(up_client), opts);
    relay.start();

    auto [down_server, down_client] = wire::make_pipe();
    std::thread downstream([&, conn = std::move(down_server)] { relay.serve_downstream(*conn); });
    Downstream client(std::move(down_client));
    CHECK(client.hs.fb_width == 64);

    const auto full = client.request(false);
    REQUIRE(full.size() == 1);
    CHECK(full[0].encoding() == target);
    if (target == Encoding::Raw) CHECK(full[0].payload.size() == 64u * 48u * 4u);
    CHECK(client.mirror == upstream_hub.snapshot().framebuffer);

    Framebuffer next = upstream_hub.snapshot().framebuffer;
    next.fill({8, 8, 20, 30}, 0x00FF8800);
    DamageRegion damage;
    damage.add({8, 8, 20, 30});
    upstream_hub.publish(next, damage, std::nullopt);
    const auto inc = client.request(true);
    std::size_t payload = 0, area = 0;
    for (const auto& u : inc) {
      CHECK(u.encoding() == target);
      payload += u.payload.size();
      area += static_cast<std::size_t>(u.rect.area());
    }
    if (target == Encoding::Raw) CHECK(payload == area * 4);
    CHECK(client.mirror == next);

    const auto ptr = wire::serialize(wire::PointerEvent{1, 33, 44});
    client.conn->write_all(ptr);
    bool seen = false;
    for (int i = 0; i < 200 && !seen; ++i) {
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
      std::lock_guard lock(mu);
      seen = pointer_bytes == ptr;
    }
    CHECK(seen);

    client.conn->close();
    downstream.join();
    relay.stop();
    upstream.join();
    CHECK(relay.tap().updates() == 2);
    if (target == Encoding::Raw) CHECK(relay.tap().captured_bytes() == relay.tap().compressed_bytes());
  }
}

TEST_CASE("upstream loss closes downstream") {
  server::ScreenHub upstream_hub(Framebuffer(32, 32));
  auto [up_server, up_client] = wire::make_pipe();
  std::thread upstream([&, conn = std::move(up_server)] { server::serve_session(*conn, upstream_hub, {}); });
  Relay relay(std::move(up_client), {});
  relay.start();
  auto [down_server, down_client] = wire::make_pipe();
  server::SessionSummary summary;
  std::thread downstream([&, conn = std::move(down_server)] { summary = relay.serve_downstream(*conn); });
  Downstream client(std::move(down_client));
  client.request(false);
  upstream_hub.close_all();
  upstream.join();
  downstream.join();
  CHECK(summary.updates == 1);
  relay.stop();
}

TEST_CASE("relay config and session") {
  RelayConfig bad;
  bad.upstream = {"127.0.0.1", 5900};
  bad.listen = {"127.0.0.1", 5900};
  CHECK_THROWS_AS(validate_relay_config(bad), ConfigError);

  server::ScreenHub hub(Framebuffer(40, 30, PixelFormat::standard(), 0x00101010));
  wire::TcpListener listener({"127.0.0.1", 0});
  std::thread upstream([&] {
    auto conn = listener.accept();
    server::serve_session(*conn, hub, {});
  });

  RelayConfig cfg;
  cfg.upstream = {"127.0.0.1", listener.port()};
  cfg.listen = {"127.0.0.1", 0};
  cfg.options.target = {Encoding::Zlib, true};
  cfg.metrics = temp_path("rfbkit_relay_session.csv");
  auto [down_server, down_client] = wire::make_pipe();
  SessionMetrics metrics;
  std::thread relay([&, conn = std::move(down_server)] { metrics = relay_session(cfg, *conn); });
  {
    Downstream client(std::move(down_client));
    client.request(false);
    CHECK(client.mirror == hub.snapshot().framebuffer);
    client.conn->close();
  }
  relay.join();
  upstream.join();
  CHECK(metrics.encoding == "zlib");
  CHECK(metrics.updates == 1);
  CHECK(metrics.captured_bytes == 40u * 30u * 4u);
  CHECK(metrics.compression_ratio > 10.0);
  const auto lines = read_lines(cfg.metrics);
  REQUIRE(lines.size() == 2);
  CHECK(lines[1] == metrics_csv_row(metrics));
  std::filesystem::remove(cfg.metrics);
}
