#include "rfbkit/wire/websocket.hpp"

#include <openssl/evp.h>
#include <openssl/sha.h>

#include <algorithm>
#include <cctype>
#include <sstream>

#include "rfbkit/codec/byte_io.hpp"
#include "rfbkit/model/error.hpp"

namespace rfbkit::wire {
namespace {

constexpr std::string_view kGuid = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11";
constexpr std::size_t kMaxHeaderBytes = 8192;
constexpr std::uint64_t kMaxFrame = 64u << 20;

enum Opcode : std::uint8_t {
  kContinuation = 0x0,
  kText = 0x1,
  kBinary = 0x2,
  kClose = 0x8,
  kPing = 0x9,
  kPong = 0xA,
};

std::string read_http_head(Connection& conn) {
  std::string head;
  std::uint8_t c;
  while (head.size() < kMaxHeaderBytes) {
    conn.read_exact({&c, 1});
    head.push_back(static_cast<char>(c));
    if (head.ends_with("\r\n\r\n")) return head;
  }
  throw ProtocolError("HTTP header too long");
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

// Header lookup by case-insensitive name; empty if absent.
std::string header(const std::string& head, const std::string& name) {
  std::istringstream lines(head);
  std::string line;
  std::getline(lines, line);
  while (std::getline(lines, line)) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    if (lower(trim(line.substr(0, colon))) == name) return trim(line.substr(colon + 1));
  }
  return {};
}

std::string base64(std::span<const std::uint8_t> data) {
  std::string out(4 * ((data.size() + 2) / 3) + 1, '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), data.data(),
                                static_cast<int>(data.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

}  // namespace

std::string websocket_accept_key(const std::string& client_key) {
  const std::string joined = client_key + std::string(kGuid);
  std::uint8_t digest[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(joined.data()), joined.size(), digest);
  return base64(digest);
}

WebSocketConnection::WebSocketConnection(std::unique_ptr<Connection> inner, bool mask_outgoing)
    : inner_(std::move(inner)), mask_outgoing_(mask_outgoing) {}

void WebSocketConnection::read_exact(std::span<std::uint8_t> buf) {
  std::size_t got = 0;
  while (got < buf.size()) {
    if (pending_pos_ == pending_.size()) {
      pending_.clear();
      pending_pos_ = 0;
      read_frame();
      continue;
    }
    const std::size_t n = std::min(buf.size() - got, pending_.size() - pending_pos_);
    std::copy_n(pending_.begin() + static_cast<std::ptrdiff_t>(pending_pos_), n,
                buf.begin() + got);
    pending_pos_ += n;
    got += n;
  }
}

void WebSocketConnection::read_frame() {
  if (closed_) throw TransportError("websocket closed");
  std::uint8_t head[2];
  inner_->read_exact(head);
  const std::uint8_t opcode = head[0] & 0x0F;
  const bool masked = head[1] & 0x80;
  std::uint64_t length = head[1] & 0x7F;
  if (length == 126) {
    std::uint8_t ext[2];
    inner_->read_exact(ext);
    length = std::uint64_t(ext[0]) << 8 | ext[1];
  } else if (length == 127) {
    std::uint8_t ext[8];
    inner_->read_exact(ext);
    length = 0;
    for (std::uint8_t b : ext) length = length << 8 | b;
  }
  if (length > kMaxFrame) throw ProtocolError("websocket frame too large");
  std::uint8_t mask[4] = {0, 0, 0, 0};
  if (masked) inner_->read_exact(mask);
  std::vector<std::uint8_t> payload(static_cast<std::size_t>(length));
  if (length) inner_->read_exact(payload);
  if (masked) {
    for (std::size_t i = 0; i < payload.size(); ++i) payload[i] ^= mask[i & 3];
  }

  switch (opcode) {
    case kBinary:
    case kContinuation:
      pending_ = std::move(payload);
      break;
    case kPing:
      send_frame(kPong, payload);
      break;
    case kPong:
      break;
    case kClose:
      closed_ = true;
      try {
        send_frame(kClose, {});
      } catch (const TransportError&) {
      }
      throw TransportError("websocket closed by peer");
    default:
      throw ProtocolError("websocket text frames are not supported");
  }
}

void WebSocketConnection::send_frame(std::uint8_t opcode, std::span<const std::uint8_t> payload) {
  std::lock_guard lock(write_mu_);
  std::vector<std::uint8_t> frame;
  frame.reserve(payload.size() + 14);
  frame.push_back(static_cast<std::uint8_t>(0x80 | opcode));
  const std::uint8_t mask_bit = mask_outgoing_ ? 0x80 : 0;
  if (payload.size() < 126) {
    frame.push_back(static_cast<std::uint8_t>(mask_bit | payload.size()));
  } else if (payload.size() <= 0xFFFF) {
    frame.push_back(mask_bit | 126);
    put_u16(frame, static_cast<std::uint16_t>(payload.size()));
  } else {
    frame.push_back(mask_bit | 127);
    put_u32(frame, static_cast<std::uint32_t>(std::uint64_t(payload.size()) >> 32));
    put_u32(frame, static_cast<std::uint32_t>(payload.size()));
  }
  if (mask_outgoing_) {
    mask_seed_ = mask_seed_ * 1664525u + 1013904223u;
    const std::uint8_t mask[4] = {std::uint8_t(mask_seed_ >> 24), std::uint8_t(mask_seed_ >> 16),
                                  std::uint8_t(mask_seed_ >> 8), std::uint8_t(mask_seed_)};
    frame.insert(frame.end(), mask, mask + 4);
    for (std::size_t i = 0; i < payload.size(); ++i) frame.push_back(payload[i] ^ mask[i & 3]);
  } else {
    frame.insert(frame.end(), payload.begin(), payload.end());
  }
  inner_->write_all(frame);
}

void WebSocketConnection::write_all(std::span<const std::uint8_t> bytes) {
  if (closed_) throw TransportError("websocket closed");
  send_frame(kBinary, bytes);
}

void WebSocketConnection::close() {
  if (!closed_) {
    closed_ = true;
    try {
      send_frame(kClose, {});
    } catch (const TransportError&) {
    }
  }
  inner_->close();
}

std::unique_ptr<Connection> accept_websocket(std::unique_ptr<Connection> conn) {
  const std::string head = read_http_head(*conn);
  if (!head.starts_with("GET ")) throw ProtocolError("websocket upgrade must be a GET request");
  if (lower(header(head, "upgrade")) != "websocket") {
    throw ProtocolError("request is not a websocket upgrade");
  }
  const std::string key = header(head, "sec-websocket-key");
  if (key.empty()) throw ProtocolError("missing Sec-WebSocket-Key");

  std::string response =
      "HTTP/1.1 101 Switching Protocols\r\n"
      "Upgrade: websocket\r\n"
      "Connection: Upgrade\r\n"
      "Sec-WebSocket-Accept: " +
      websocket_accept_key(key) + "\r\n";
  // Browser viewers commonly ask for the "binary" subprotocol.
  const std::string protocols = lower(header(head, "sec-websocket-protocol"));
  if (protocols.find("binary") != std::string::npos) {
    response += "Sec-WebSocket-Protocol: binary\r\n";
  }
  response += "\r\n";
  conn->write_all({reinterpret_cast<const std::uint8_t*>(response.data()), response.size()});
  return std::make_unique<WebSocketConnection>(std::move(conn), false);
}

std::unique_ptr<Connection> connect_websocket(std::unique_ptr<Connection> conn,
                                              const std::string& host, const std::string& path) {
  const std::string key = "dGhlIHNhbXBsZSBub25jZQ==";
  const std::string request = "GET " + path + " HTTP/1.1\r\nHost: " + host +
                              "\r\nUpgrade: websocket\r\nConnection: Upgrade\r\n"
                              "Sec-WebSocket-Key: " +
                              key + "\r\nSec-WebSocket-Version: 13\r\n\r\n";
  conn->write_all({reinterpret_cast<const std::uint8_t*>(request.data()), request.size()});
  const std::string head = read_http_head(*conn);
  if (!head.starts_with("HTTP/1.1 101")) throw ProtocolError("websocket upgrade refused");
  if (header(head, "sec-websocket-accept") != websocket_accept_key(key)) {
    throw ProtocolError("websocket accept key mismatch");
  }
  return std::make_unique<WebSocketConnection>(std::move(conn), true);
}

}  // namespace rfbkit::wire
