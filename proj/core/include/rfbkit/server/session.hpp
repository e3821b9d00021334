#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "rfbkit/model/clock.hpp"
#include "rfbkit/model/encoding.hpp"
#include "rfbkit/server/screen_hub.hpp"
#include "rfbkit/wire/handshake.hpp"
#include "rfbkit/wire/messages.hpp"
#include "rfbkit/wire/transport.hpp"

namespace rfbkit::server {

// Writes one serialized update and returns the time at which the link can
// take the next one.
using UpdateWriter = std::function<double(wire::Connection&, std::span<const std::uint8_t>)>;
// Observes every update after it is written, in the client's pixel format.
using UpdateObserver = std::function<void(std::span<const RectUpdate>, const PixelFormat&)>;
// Sees each client message with its exact wire bytes.
using InputHandler = std::function<void(const wire::ClientMessage&, std::span<const std::uint8_t>)>;

struct SessionOptions {
  std::string desktop_name = "rfbkit";
  std::set<Encoding> supported = {Encoding::Raw, Encoding::CopyRect, Encoding::RRE,
                                  Encoding::Hextile, Encoding::Zlib};
  // When set, ignores SetEncodings and always uses this encoding.
  std::optional<Encoding> forced;
  bool strict = false;
  int zlib_level = 6;
  const Clock* clock = nullptr;  // defaults to a steady clock
  UpdateWriter writer;           // defaults to an unthrottled write
  UpdateObserver observer;
  InputHandler on_input;
};

struct SessionSummary {
  wire::HandshakeResult handshake;
  std::uint64_t updates = 0;
  std::uint64_t rectangles = 0;
  std::uint64_t copy_rects = 0;
  std::uint64_t bytes_written = 0;
  // Empty when the client simply went away.
  std::string error;
};

// Runs one RFB session against the hub until the client disconnects or the
// hub closes. Transport errors end the session; they are reported in the
// summary, not thrown. HandshakeError propagates.
SessionSummary serve_session(wire::Connection& conn, ScreenHub& hub, const SessionOptions& options);

}  // namespace rfbkit::server
