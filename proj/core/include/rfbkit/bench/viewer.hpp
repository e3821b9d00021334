#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "rfbkit/codec/rect_codec.hpp"
#include "rfbkit/model/framebuffer.hpp"
#include "rfbkit/wire/handshake.hpp"
#include "rfbkit/wire/transport.hpp"

namespace rfbkit::bench {

// Client that mirrors the remote framebuffer: asks for a full frame, then
// keeps one incremental request outstanding and decodes every update.
class HeadlessViewer {
 public:
  HeadlessViewer(std::unique_ptr<wire::Connection> conn, std::vector<std::int32_t> encodings);
  ~HeadlessViewer();
  HeadlessViewer(const HeadlessViewer&) = delete;
  HeadlessViewer& operator=(const HeadlessViewer&) = delete;

  // Handshake and initial requests, then the receive loop on a thread.
  void start();
  void stop();

  // Sends a client message as is.
  void send(std::span<const std::uint8_t> bytes);

  Framebuffer framebuffer() const;
  std::uint64_t updates() const { return updates_.load(); }
  const wire::HandshakeResult& handshake() const { return handshake_; }
  bool running() const { return running_.load(); }
  // Why the receive loop ended; empty for a clean close.
  std::string error() const;

 private:
  void loop();

  std::unique_ptr<wire::Connection> conn_;
  std::vector<std::int32_t> encodings_;
  wire::HandshakeResult handshake_;
  codec::RectDecoder decoder_;
  mutable std::mutex mu_;
  Framebuffer fb_;
  std::mutex write_mu_;
  std::atomic<std::uint64_t> updates_{0};
  std::atomic<bool> running_{false};
  std::atomic<bool> stopping_{false};
  std::string error_;
  std::thread thread_;
};

}  // namespace rfbkit::bench
