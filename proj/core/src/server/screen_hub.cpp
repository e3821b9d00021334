#include "rfbkit/server/screen_hub.hpp"

#include <chrono>

#include "rfbkit/model/error.hpp"

namespace rfbkit::server {

ScreenHub::ScreenHub(Framebuffer initial, std::optional<ScrollMeta> scroll)
    : width_(initial.width()),
      height_(initial.height()),
      format_(initial.format()),
      screen_(std::move(initial)),
      scroll_(scroll) {}

ScreenHub::ClientId ScreenHub::attach() {
  std::lock_guard lock(mu_);
  const ClientId id = next_id_++;
  Slot& s = slots_[id];
  s.closed = shutdown_;
  return id;
}

void ScreenHub::detach(ClientId id) {
  std::lock_guard lock(mu_);
  slots_.erase(id);
  cv_.notify_all();
}

std::size_t ScreenHub::client_count() const {
  std::lock_guard lock(mu_);
  return slots_.size();
}

void ScreenHub::publish(const Framebuffer& source, const DamageRegion& damage,
                        std::optional<ScrollMeta> scroll) {
  if (source.width() != width_ || source.height() != height_) {
    throw ShapeError("publish: framebuffer size does not match the screen");
  }
  std::lock_guard lock(mu_);
  for (const Rect& r : damage.rects()) screen_.copy_from(source, r);
  scroll_ = scroll;
  if (!damage.empty()) {
    for (auto& [id, s] : slots_) s.damage.add(damage);
  }
  cv_.notify_all();
}

ScreenSnapshot ScreenHub::snapshot() const {
  std::lock_guard lock(mu_);
  return {screen_, scroll_};
}

void ScreenHub::request(ClientId id, const wire::FramebufferUpdateRequest& req) {
  std::lock_guard lock(mu_);
  auto it = slots_.find(id);
  if (it == slots_.end()) return;
  Slot& s = it->second;
  const Rect clipped = req.rect.intersect(screen_.bounds());
  if (s.pending) {
    s.pending->rect = s.pending->rect.bounding_union(clipped);
    s.pending->incremental = s.pending->incremental && req.incremental;
  } else {
    s.pending = wire::FramebufferUpdateRequest{req.incremental, clipped};
  }
  cv_.notify_all();
}

bool ScreenHub::has_work(const Slot& s) const {
  if (!s.pending || s.closed) return false;
  if (!s.pending->incremental) return true;
  return !s.damage.clipped(s.pending->rect).empty();
}

bool ScreenHub::sendable(const Slot& s, double now) const {
  return !s.sending && has_work(s) && now >= s.link_ready;
}

std::optional<ScreenHub::Job> ScreenHub::wait_for_job(ClientId id, const Clock& clock) {
  std::unique_lock lock(mu_);
  while (true) {
    auto it = slots_.find(id);
    if (it == slots_.end() || it->second.closed) return std::nullopt;
    Slot& s = it->second;
    if (sendable(s, clock.now())) {
      Job job{*s.pending, {screen_, scroll_}};
      s.damage.subtract(s.pending->rect);
      s.pending.reset();
      s.sending = true;
      return job;
    }
    // Real clocks pass time without notifications.
    cv_.wait_for(lock, std::chrono::milliseconds(clock.is_virtual() ? 50 : 2));
  }
}

void ScreenHub::finish_job(ClientId id, double link_ready) {
  std::lock_guard lock(mu_);
  auto it = slots_.find(id);
  if (it == slots_.end()) return;
  it->second.sending = false;
  it->second.link_ready = link_ready;
  cv_.notify_all();
}

void ScreenHub::requeue(ClientId id, const wire::FramebufferUpdateRequest& req) {
  std::lock_guard lock(mu_);
  auto it = slots_.find(id);
  if (it == slots_.end()) return;
  Slot& s = it->second;
  s.sending = false;
  if (s.pending) {
    s.pending->rect = s.pending->rect.bounding_union(req.rect);
    s.pending->incremental = s.pending->incremental && req.incremental;
  } else {
    s.pending = req;
  }
  cv_.notify_all();
}

void ScreenHub::close(ClientId id) {
  std::lock_guard lock(mu_);
  auto it = slots_.find(id);
  if (it != slots_.end()) it->second.closed = true;
  cv_.notify_all();
}

void ScreenHub::close_all() {
  std::lock_guard lock(mu_);
  shutdown_ = true;
  for (auto& [id, s] : slots_) s.closed = true;
  cv_.notify_all();
}

bool ScreenHub::closed() const {
  std::lock_guard lock(mu_);
  return shutdown_;
}

void ScreenHub::notify() {
  std::lock_guard lock(mu_);
  cv_.notify_all();
}

bool ScreenHub::quiescent(double now) const {
  std::lock_guard lock(mu_);
  for (const auto& [id, s] : slots_) {
    if (s.closed) continue;
    if (!s.pending || s.sending || sendable(s, now)) return false;
  }
  return true;
}

std::optional<double> ScreenHub::next_wakeup(double now) const {
  std::lock_guard lock(mu_);
  std::optional<double> best;
  for (const auto& [id, s] : slots_) {
    if (s.closed || s.sending || !has_work(s) || s.link_ready <= now) continue;
    if (!best || s.link_ready < *best) best = s.link_ready;
  }
  return best;
}

}  // namespace rfbkit::server
