#include "rfbkit/accel/relay.hpp"

#include "rfbkit/accel/transcode.hpp"
#include "rfbkit/model/error.hpp"
#include "rfbkit/wire/messages.hpp"

namespace rfbkit::accel {

Relay::Relay(std::unique_ptr<wire::Connection> upstream, RelayOptions options)
    : options_(std::move(options)),
      clock_(options_.clock ? *options_.clock : static_cast<Clock&>(steady_)),
      upstream_(std::move(upstream)),
      link_(options_.link, clock_) {}

Relay::~Relay() { stop(); }

server::ScreenHub& Relay::hub() {
  if (!hub_) throw PreconditionError("relay not started");
  return *hub_;
}

std::string Relay::upstream_error() const {
  std::lock_guard lock(error_mu_);
  return error_;
}

void Relay::send_upstream(std::span<const std::uint8_t> bytes) {
  std::lock_guard lock(upstream_write_mu_);
  upstream_->write_all(bytes);
}

void Relay::request_upstream(bool incremental) {
  const auto bytes = wire::serialize(wire::ClientMessage{
      wire::FramebufferUpdateRequest{incremental, shadow_.bounds()}});
  send_upstream(bytes);
}

void Relay::start() {
  handshake_ = wire::client_handshake(*upstream_, true);
  shadow_ = Framebuffer(handshake_.fb_width, handshake_.fb_height, handshake_.server_format);
  send_upstream(wire::serialize(wire::ClientMessage{wire::SetEncodings{options_.upstream_encodings}}));
  request_upstream(false);
  while (true) {
    auto msg = wire::read_server_message(*upstream_, shadow_.format());
    if (auto* u = std::get_if<wire::FramebufferUpdate>(&msg)) {
      absorb_update(shadow_, u->rects, decoder_);
      break;
    }
  }
  hub_ = std::make_unique<server::ScreenHub>(shadow_);
  request_upstream(true);
  reader_ = std::thread([this] { reader_loop(); });
}

void Relay::reader_loop() {
  try {
    while (true) {
      auto msg = wire::read_server_message(*upstream_, shadow_.format());
      auto* u = std::get_if<wire::FramebufferUpdate>(&msg);
      if (!u) continue;
      const DamageRegion damage = absorb_update(shadow_, u->rects, decoder_);
      hub_->publish(shadow_, damage, std::nullopt);
      request_upstream(true);
    }
  } catch (const TransportError& e) {
    if (!stopping_) {
      std::lock_guard lock(error_mu_);
      error_ = std::string("upstream closed: ") + e.what();
    }
  } catch (const std::exception& e) {
    std::lock_guard lock(error_mu_);
    error_ = e.what();
  }
  hub_->close_all();
}

server::SessionSummary Relay::serve_downstream(wire::Connection& downstream) {
  server::SessionOptions opt;
  opt.desktop_name = handshake_.desktop_name;
  opt.supported = {Encoding::Raw, Encoding::RRE, Encoding::Hextile, Encoding::Zlib};
  opt.forced = options_.target.encoding;
  opt.strict = options_.target.strict;
  opt.zlib_level = options_.zlib_level;
  opt.clock = &clock_;
  opt.writer = [this](wire::Connection& conn, std::span<const std::uint8_t> bytes) {
    return link_.write(conn, bytes);
  };
  opt.observer = [this](std::span<const RectUpdate> rects, const PixelFormat& fmt) {
    tap_.record(rects, fmt);
  };
  opt.on_input = [this](const wire::ClientMessage& msg, std::span<const std::uint8_t> raw) {
    if (std::holds_alternative<wire::SetPixelFormat>(msg) ||
        std::holds_alternative<wire::SetEncodings>(msg)) {
      return;  // these describe the downstream hop only
    }
    try {
      send_upstream(raw);
    } catch (const TransportError&) {
      // Reported by the upstream reader.
    }
  };
  return server::serve_session(downstream, hub(), opt);
}

void Relay::stop() {
  stopping_ = true;
  if (upstream_) upstream_->close();
  if (hub_) hub_->close_all();
  if (reader_.joinable()) reader_.join();
}

void validate_relay_config(const RelayConfig& config) {
  if (config.upstream.host == config.listen.host && config.upstream.port == config.listen.port) {
    throw ConfigError("upstream and listen address are the same");
  }
  config.options.link.validate();
  if (config.options.target.encoding == Encoding::CopyRect) {
    throw ConfigError("copyrect cannot be the target encoding");
  }
}

SessionMetrics relay_session(const RelayConfig& config, wire::Connection& downstream) {
  validate_relay_config(config);
  SteadyClock clock;
  RelayOptions options = config.options;
  if (!options.clock) options.clock = &clock;
  Relay relay(wire::connect_tcp(config.upstream), options);
  relay.start();
  const double start = options.clock->now();
  const server::SessionSummary summary = relay.serve_downstream(downstream);
  const double duration = options.clock->now() - start;
  relay.stop();
  SessionMetrics m =
      relay.tap().snapshot(std::string(encoding_name(options.target.encoding)), duration);
  if (!config.metrics.empty()) append_metrics_csv(config.metrics, m);
  if (!summary.error.empty() && relay.upstream_error().empty()) {
    throw ProtocolError("downstream session failed: " + summary.error);
  }
  return m;
}

}  // namespace rfbkit::accel
