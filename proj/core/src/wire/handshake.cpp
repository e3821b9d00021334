#include "rfbkit/wire/handshake.hpp"

#include <array>

#include "rfbkit/codec/byte_io.hpp"
#include "rfbkit/model/error.hpp"
#include "rfbkit/wire/messages.hpp"
#include "rfbkit/wire/stream_reader.hpp"

namespace rfbkit::wire {
namespace {

constexpr std::uint32_t kMaxNameLength = 4096;

std::string read_version(StreamReader& in) {
  std::array<std::uint8_t, 12> buf;
  in.read(buf);
  return {buf.begin(), buf.end()};
}

std::string printable(const std::string& version) {
  std::string out;
  for (char c : version) out += (c >= 0x20 && c < 0x7F) ? c : '.';
  return out;
}

void send_failure(Connection& conn, const std::string& reason) {
  std::vector<std::uint8_t> out;
  put_u32(out, 1);
  put_u32(out, static_cast<std::uint32_t>(reason.size()));
  out.insert(out.end(), reason.begin(), reason.end());
  try {
    conn.write_all(out);
  } catch (const TransportError&) {
  }
}

}  // namespace

std::vector<std::uint8_t> serialize_server_init(const ServerInit& init) {
  if (init.width < 1 || init.height < 1 || init.width > 0xFFFF || init.height > 0xFFFF) {
    throw RangeError("ServerInit dimensions must be in 1..65535");
  }
  std::vector<std::uint8_t> out;
  put_u16(out, static_cast<std::uint16_t>(init.width));
  put_u16(out, static_cast<std::uint16_t>(init.height));
  put_bytes(out, serialize_pixel_format(init.format));
  put_u32(out, static_cast<std::uint32_t>(init.name.size()));
  out.insert(out.end(), init.name.begin(), init.name.end());
  return out;
}

HandshakeResult server_handshake(Connection& conn, const ServerInit& init) {
  StreamReader in(conn);
  conn.write_all({reinterpret_cast<const std::uint8_t*>(kProtocolVersion.data()),
                  kProtocolVersion.size()});
  const std::string version = read_version(in);
  if (version != kProtocolVersion) {
    throw HandshakeError("unsupported client version '" + printable(version) + "'");
  }

  const std::uint8_t offer[] = {1, kSecurityNone};
  conn.write_all(offer);
  const std::uint8_t chosen = in.u8();
  if (chosen != kSecurityNone) {
    send_failure(conn, "security type not supported");
    throw HandshakeError("client chose security type " + std::to_string(chosen));
  }
  const std::uint8_t ok[] = {0, 0, 0, 0};
  conn.write_all(ok);

  const bool shared = in.u8() != 0;
  conn.write_all(serialize_server_init(init));

  HandshakeResult result;
  result.version = std::string(kProtocolVersion.substr(0, 11));
  result.fb_width = init.width;
  result.fb_height = init.height;
  result.server_format = init.format;
  result.desktop_name = init.name;
  result.shared = shared;
  return result;
}

HandshakeResult client_handshake(Connection& conn, bool shared) {
  StreamReader in(conn);
  const std::string version = read_version(in);
  if (version != kProtocolVersion) {
    throw HandshakeError("unsupported server version '" + printable(version) + "'");
  }
  conn.write_all({reinterpret_cast<const std::uint8_t*>(kProtocolVersion.data()),
                  kProtocolVersion.size()});

  const std::uint8_t count = in.u8();
  if (count == 0) {
    const std::uint32_t len = in.u32();
    const auto reason = in.bytes(std::min(len, kMaxNameLength));
    throw HandshakeError("server refused connection: " + std::string(reason.begin(), reason.end()));
  }
  bool none_offered = false;
  for (std::uint8_t i = 0; i < count; ++i) none_offered |= in.u8() == kSecurityNone;
  if (!none_offered) throw HandshakeError("server does not offer security type None");
  const std::uint8_t choose[] = {kSecurityNone};
  conn.write_all(choose);
  const std::uint32_t status = in.u32();
  if (status != 0) {
    const std::uint32_t len = in.u32();
    const auto reason = in.bytes(std::min(len, kMaxNameLength));
    throw HandshakeError("security handshake failed: " +
                         std::string(reason.begin(), reason.end()));
  }

  const std::uint8_t client_init[] = {std::uint8_t(shared ? 1 : 0)};
  conn.write_all(client_init);

  HandshakeResult result;
  result.version = std::string(kProtocolVersion.substr(0, 11));
  result.shared = shared;
  try {
    result.fb_width = in.u16();
    result.fb_height = in.u16();
    const auto format = in.bytes(kPixelFormatSize);
    result.server_format = parse_pixel_format(format);
    const std::uint32_t name_length = in.u32();
    if (name_length > kMaxNameLength) throw ProtocolError("desktop name is too long");
    const auto name = in.bytes(name_length);
    result.desktop_name.assign(name.begin(), name.end());
  } catch (const TransportError& e) {
    throw FramingError(std::string("truncated ServerInit: ") + e.what());
  }
  if (result.fb_width < 1 || result.fb_height < 1) {
    throw ProtocolError("server announced an empty framebuffer");
  }
  return result;
}

}  // namespace rfbkit::wire
