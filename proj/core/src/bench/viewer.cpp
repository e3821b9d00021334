#include "rfbkit/bench/viewer.hpp"

#include "rfbkit/model/error.hpp"
#include "rfbkit/wire/messages.hpp"

namespace rfbkit::bench {

HeadlessViewer::HeadlessViewer(std::unique_ptr<wire::Connection> conn, std::vector<std::int32_t> encodings)
    : conn_(std::move(conn)), encodings_(std::move(encodings)) {}

HeadlessViewer::~HeadlessViewer() { stop(); }

void HeadlessViewer::send(std::span<const std::uint8_t> bytes) {
  std::lock_guard lock(write_mu_);
  conn_->write_all(bytes);
}

void HeadlessViewer::start() {
  handshake_ = wire::client_handshake(*conn_, true);
  {
    std::lock_guard lock(mu_);
    fb_ = Framebuffer(handshake_.fb_width, handshake_.fb_height, handshake_.server_format);
  }
  send(wire::serialize(wire::ClientMessage{wire::SetEncodings{encodings_}}));
  send(wire::serialize(wire::ClientMessage{wire::FramebufferUpdateRequest{false, fb_.bounds()}}));
  running_ = true;
  thread_ = std::thread([this] { loop(); });
}

void HeadlessViewer::loop() {
  // Decoding happens on a private copy so readers never see half an update.
  Framebuffer work;
  {
    std::lock_guard lock(mu_);
    work = fb_;
  }
  const auto next = wire::serialize(wire::ClientMessage{wire::FramebufferUpdateRequest{true, work.bounds()}});
  try {
    while (true) {
      auto msg = wire::read_server_message(*conn_, work.format());
      auto* u = std::get_if<wire::FramebufferUpdate>(&msg);
      if (!u) continue;
      for (const auto& r : u->rects) {
        if (!work.contains(r.rect)) throw BoundsError("update rectangle outside the screen");
        decoder_.apply(r, work);
      }
      {
        std::lock_guard lock(mu_);
        for (const auto& r : u->rects) fb_.copy_from(work, r.rect);
      }
      ++updates_;
      send(next);
    }
  } catch (const TransportError& e) {
    if (!stopping_) {
      std::lock_guard lock(mu_);
      error_ = std::string("connection closed: ") + e.what();
    }
  } catch (const std::exception& e) {
    std::lock_guard lock(mu_);
    error_ = e.what();
  }
  running_ = false;
}

void HeadlessViewer::stop() {
  stopping_ = true;
  if (conn_) conn_->close();
  if (thread_.joinable()) thread_.join();
}

Framebuffer HeadlessViewer::framebuffer() const {
  std::lock_guard lock(mu_);
  return fb_;
}

std::string HeadlessViewer::error() const {
  std::lock_guard lock(mu_);
  return error_;
}

}  // namespace rfbkit::bench
