#pragma once

#include <condition_variable>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>

#include "rfbkit/model/clock.hpp"
#include "rfbkit/model/framebuffer.hpp"
#include "rfbkit/model/region.hpp"
#include "rfbkit/server/scene.hpp"
#include "rfbkit/wire/messages.hpp"

namespace rfbkit::server {

struct ScreenSnapshot {
  Framebuffer framebuffer;
  std::optional<ScrollMeta> scroll;
};

// Shared screen contents plus per-client delivery state. Producers publish
// damage; each client session pulls a job once it has an outstanding request,
// pending damage (or a non-incremental request) and a free link.
class ScreenHub {
 public:
  using ClientId = std::uint64_t;

  struct Job {
    wire::FramebufferUpdateRequest request;
    ScreenSnapshot snapshot;
  };

  explicit ScreenHub(Framebuffer initial, std::optional<ScrollMeta> scroll = std::nullopt);

  int width() const { return width_; }
  int height() const { return height_; }
  PixelFormat format() const { return format_; }

  ClientId attach();
  void detach(ClientId id);
  std::size_t client_count() const;

  // Copies the damaged pixels of `source` into the shared screen and marks
  // them dirty for every client.
  void publish(const Framebuffer& source, const DamageRegion& damage,
               std::optional<ScrollMeta> scroll);
  ScreenSnapshot snapshot() const;

  // Merges into any outstanding request of the client.
  void request(ClientId id, const wire::FramebufferUpdateRequest& req);
  // Blocks until the client can be served; nullopt once the client is closed.
  std::optional<Job> wait_for_job(ClientId id, const Clock& clock);
  // The update went out; the link is busy until link_ready.
  void finish_job(ClientId id, double link_ready);
  // Nothing visible changed for the client; keep waiting on `req`.
  void requeue(ClientId id, const wire::FramebufferUpdateRequest& req);
  void close(ClientId id);
  void close_all();
  bool closed() const;

  // Wakes waiters after an external clock change.
  void notify();
  // Every client has a request outstanding, nothing in flight and nothing
  // it could send at `now`.
  bool quiescent(double now) const;
  // Earliest link_ready after `now` among clients with work waiting on it.
  std::optional<double> next_wakeup(double now) const;

 private:
  struct Slot {
    DamageRegion damage;
    std::optional<wire::FramebufferUpdateRequest> pending;
    bool sending = false;
    bool closed = false;
    double link_ready = 0.0;
  };
  bool has_work(const Slot& s) const;
  bool sendable(const Slot& s, double now) const;

  int width_;
  int height_;
  PixelFormat format_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  Framebuffer screen_;
  std::optional<ScrollMeta> scroll_;
  std::map<ClientId, Slot> slots_;
  ClientId next_id_ = 1;
  bool shutdown_ = false;
};

}  // namespace rfbkit::server
