#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "rfbkit/wire/transport.hpp"

namespace rfbkit::wire {

// Value of Sec-WebSocket-Accept for a client key.
std::string websocket_accept_key(const std::string& client_key);

// Binary-message byte stream over a WebSocket. Message boundaries are not
// preserved; the RFB stream is carried as-is.
class WebSocketConnection final : public Connection {
 public:
  // `mask_outgoing` is true for the client role.
  WebSocketConnection(std::unique_ptr<Connection> inner, bool mask_outgoing);

  void read_exact(std::span<std::uint8_t> buf) override;
  void write_all(std::span<const std::uint8_t> bytes) override;
  void close() override;
  std::string peer() const override { return inner_->peer(); }

 private:
  void read_frame();
  void send_frame(std::uint8_t opcode, std::span<const std::uint8_t> payload);

  std::unique_ptr<Connection> inner_;
  bool mask_outgoing_;
  std::vector<std::uint8_t> pending_;
  std::size_t pending_pos_ = 0;
  bool closed_ = false;
  std::mutex write_mu_;
  std::uint32_t mask_seed_ = 0x9E3779B9u;
};

// Server side: reads the HTTP upgrade request, answers 101 and returns the
// framed connection. ProtocolError if the request is not a WebSocket upgrade.
std::unique_ptr<Connection> accept_websocket(std::unique_ptr<Connection> conn);

// Client side, used by tests and tools.
std::unique_ptr<Connection> connect_websocket(std::unique_ptr<Connection> conn,
                                              const std::string& host,
                                              const std::string& path = "/");

}  // namespace rfbkit::wire
