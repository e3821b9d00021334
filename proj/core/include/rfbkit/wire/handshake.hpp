#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rfbkit/model/pixel_format.hpp"
#include "rfbkit/wire/transport.hpp"

namespace rfbkit::wire {

inline constexpr std::string_view kProtocolVersion = "RFB 003.008\n";
inline constexpr std::uint8_t kSecurityNone = 1;
inline constexpr std::uint16_t kDefaultPort = 5900;

struct ServerInit {
  int width = 0;
  int height = 0;
  PixelFormat format;
  std::string name;
};

struct HandshakeResult {
  std::string version;  // without the trailing newline
  std::string security = "None";
  int fb_width = 0;
  int fb_height = 0;
  PixelFormat server_format;
  std::string desktop_name;
  bool shared = false;

  bool operator==(const HandshakeResult&) const = default;
};

std::vector<std::uint8_t> serialize_server_init(const ServerInit& init);

// Version exchange, security type None, ClientInit, ServerInit.
HandshakeResult server_handshake(Connection& conn, const ServerInit& init);
HandshakeResult client_handshake(Connection& conn, bool shared);

}  // namespace rfbkit::wire
