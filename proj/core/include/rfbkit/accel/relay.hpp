#pragma once

#include <atomic>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "rfbkit/accel/link.hpp"
#include "rfbkit/accel/metrics_tap.hpp"
#include "rfbkit/codec/rect_codec.hpp"
#include "rfbkit/server/screen_hub.hpp"
#include "rfbkit/server/session.hpp"
#include "rfbkit/wire/handshake.hpp"
#include "rfbkit/wire/transport.hpp"

namespace rfbkit::accel {

struct RelayOptions {
  codec::EncodingChoice target;
  LinkConfig link;
  int zlib_level = 6;
  Clock* clock = nullptr;  // defaults to a steady clock
  // Encodings asked of the server. Raw keeps the upstream hop cheap to decode;
  // CopyRect is applied to the shadow.
  std::vector<std::int32_t> upstream_encodings = {static_cast<std::int32_t>(Encoding::CopyRect),
                                                  static_cast<std::int32_t>(Encoding::Raw)};
};

// One upstream session feeding one shadow framebuffer, re-encoded for
// downstream clients over a throttled link.
class Relay {
 public:
  Relay(std::unique_ptr<wire::Connection> upstream, RelayOptions options);
  ~Relay();
  Relay(const Relay&) = delete;
  Relay& operator=(const Relay&) = delete;

  // Handshakes upstream, loads the first full frame into the shadow and
  // starts the upstream reader.
  void start();
  // Serves one downstream client until it leaves or upstream goes away.
  server::SessionSummary serve_downstream(wire::Connection& downstream);
  // Closes upstream and ends all downstream sessions.
  void stop();

  server::ScreenHub& hub();
  const MetricsTap& tap() const { return tap_; }
  const ThrottledLink& link() const { return link_; }
  const wire::HandshakeResult& upstream_handshake() const { return handshake_; }
  std::string upstream_error() const;

 private:
  void reader_loop();
  void send_upstream(std::span<const std::uint8_t> bytes);
  void request_upstream(bool incremental);

  RelayOptions options_;
  SteadyClock steady_;
  Clock& clock_;
  std::unique_ptr<wire::Connection> upstream_;
  std::mutex upstream_write_mu_;
  wire::HandshakeResult handshake_;
  Framebuffer shadow_;
  codec::RectDecoder decoder_;
  std::unique_ptr<server::ScreenHub> hub_;
  ThrottledLink link_;
  MetricsTap tap_;
  std::thread reader_;
  mutable std::mutex error_mu_;
  std::string error_;
  std::atomic<bool> stopping_{false};
};

struct RelayConfig {
  wire::Endpoint upstream;
  wire::Endpoint listen;
  RelayOptions options;
  std::filesystem::path metrics;  // empty: no CSV
};

// ConfigError if upstream and listen name the same address.
void validate_relay_config(const RelayConfig& config);

// Relays one already-accepted downstream connection: connects upstream,
// serves the client to the end, appends the metrics row. Duration is wall
// time from the downstream handshake to the end of the session.
SessionMetrics relay_session(const RelayConfig& config, wire::Connection& downstream);

}  // namespace rfbkit::accel
