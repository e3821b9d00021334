#include "rfbkit/server/session.hpp"

#include <algorithm>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "rfbkit/codec/copyrect.hpp"
#include "rfbkit/codec/rect_codec.hpp"
#include "rfbkit/model/error.hpp"
#include "rfbkit/server/damage.hpp"

namespace rfbkit::server {
namespace {

// Shifts the client's copy of the scroll viewport when most of it is still
// valid after the scroll. Correctness does not depend on the guess: the
// remaining differences are found by the diff that follows.
std::optional<RectUpdate> try_scroll_copy(Framebuffer& shadow, const Framebuffer& snap,
                                          const std::optional<ScrollMeta>& before,
                                          const std::optional<ScrollMeta>& after, const Rect& area) {
  if (!before || !after || before->viewport != after->viewport) return std::nullopt;
  const Rect vp = after->viewport;
  if (!area.contains(vp)) return std::nullopt;
  const std::int64_t delta = after->offset - before->offset;
  if (delta == 0 || std::llabs(delta) >= vp.h) return std::nullopt;
  const int d = static_cast<int>(std::llabs(delta));
  const Rect dst = delta > 0 ? Rect{vp.x, vp.y, vp.w, vp.h - d} : Rect{vp.x, vp.y + d, vp.w, vp.h - d};
  const int src_y = delta > 0 ? vp.y + d : vp.y;

  int matching = 0;
  for (int r = 0; r < dst.h; ++r) {
    auto want = snap.row(dst.y + r).subspan(dst.x, dst.w);
    auto have = shadow.row(src_y + r).subspan(dst.x, dst.w);
    if (std::equal(want.begin(), want.end(), have.begin())) ++matching;
  }
  if (matching * 2 < dst.h) return std::nullopt;

  codec::apply_copyrect(shadow, dst, dst.x, src_y);
  const auto payload = codec::encode_copyrect(dst.x, src_y);
  return RectUpdate{dst, static_cast<std::int32_t>(Encoding::CopyRect), {payload.begin(), payload.end()}};
}

}  // namespace

SessionSummary serve_session(wire::Connection& conn, ScreenHub& hub, const SessionOptions& opt) {
  SteadyClock steady;
  const Clock& clock = opt.clock ? *opt.clock : steady;

  SessionSummary summary;
  summary.handshake =
      wire::server_handshake(conn, {hub.width(), hub.height(), hub.format(), opt.desktop_name});
  const ScreenHub::ClientId id = hub.attach();

  std::mutex mu;
  PixelFormat client_format = hub.format();
  std::vector<std::int32_t> prefs;
  std::string reader_error;

  std::thread reader([&] {
    try {
      while (true) {
        std::vector<std::uint8_t> raw;
        const wire::ClientMessage msg = wire::read_client_message(conn, &raw);
        if (const auto* spf = std::get_if<wire::SetPixelFormat>(&msg)) {
          std::lock_guard lock(mu);
          client_format = spf->format;
        } else if (const auto* se = std::get_if<wire::SetEncodings>(&msg)) {
          std::lock_guard lock(mu);
          prefs = se->encodings;
        } else if (const auto* req = std::get_if<wire::FramebufferUpdateRequest>(&msg)) {
          hub.request(id, *req);
        }
        if (opt.on_input) opt.on_input(msg, raw);
      }
    } catch (const TransportError&) {
      // Client went away.
    } catch (const std::exception& e) {
      std::lock_guard lock(mu);
      reader_error = e.what();
    }
    hub.close(id);
  });

  codec::RectEncoder encoder({Encoding::Raw, opt.strict}, opt.zlib_level);
  Framebuffer shadow;
  bool shadow_valid = false;
  std::optional<ScrollMeta> client_scroll;

  try {
    while (auto job = hub.wait_for_job(id, clock)) {
      PixelFormat fmt;
      std::vector<std::int32_t> p;
      {
        std::lock_guard lock(mu);
        fmt = client_format;
        p = prefs;
      }
      const codec::EncodingChoice choice = opt.forced
                                               ? codec::EncodingChoice{*opt.forced, opt.strict}
                                               : codec::negotiate_encoding(p, opt.supported, opt.strict);
      encoder.set_choice(choice);
      const bool copy_allowed = opt.supported.count(Encoding::CopyRect) > 0 &&
                                std::find(p.begin(), p.end(), 1) != p.end();

      const Framebuffer& snap = job->snapshot.framebuffer;
      const Rect area = job->request.rect;
      if (!shadow_valid) shadow = Framebuffer(snap.width(), snap.height(), snap.format());

      std::vector<RectUpdate> rects;
      DamageRegion region;
      if (!job->request.incremental) {
        if (!area.empty()) region.add(area);
      } else if (!shadow_valid) {
        region.add(snap.bounds());
      } else {
        if (copy_allowed) {
          if (auto copy = try_scroll_copy(shadow, snap, client_scroll, job->snapshot.scroll, area)) {
            rects.push_back(std::move(*copy));
            ++summary.copy_rects;
          }
        }
        region = compute_damage_in(shadow, snap, area);
        if (rects.empty() && region.empty()) {
          hub.requeue(id, job->request);
          continue;
        }
      }

      const Framebuffer converted = fmt == snap.format() ? Framebuffer() : snap.converted(fmt);
      const Framebuffer& source = fmt == snap.format() ? snap : converted;
      for (const Rect& r : region.rects()) rects.push_back(encoder.encode(source, r));

      const auto bytes = wire::serialize_update(rects);
      double ready = 0.0;
      if (opt.writer) {
        ready = opt.writer(conn, bytes);
      } else {
        conn.write_all(bytes);
        ready = clock.now();
      }
      if (opt.observer) opt.observer(rects, fmt);

      ++summary.updates;
      summary.rectangles += rects.size();
      summary.bytes_written += bytes.size();
      for (const Rect& r : region.rects()) shadow.copy_from(snap, r);
      if (area.contains(snap.bounds()) || shadow_valid || job->request.incremental) shadow_valid = true;
      client_scroll = job->snapshot.scroll;
      hub.finish_job(id, ready);
    }
  } catch (const TransportError&) {
    // Client went away mid-write.
  } catch (const std::exception& e) {
    summary.error = e.what();
  }

  hub.close(id);
  conn.close();
  reader.join();
  hub.detach(id);
  if (summary.error.empty()) summary.error = reader_error;
  return summary;
}

}  // namespace rfbkit::server
