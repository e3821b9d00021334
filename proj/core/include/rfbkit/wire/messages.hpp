#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rfbkit/codec/rect_codec.hpp"
#include "rfbkit/model/encoding.hpp"
#include "rfbkit/model/framebuffer.hpp"
#include "rfbkit/wire/transport.hpp"

namespace rfbkit::wire {

// Client to server.
struct SetPixelFormat {
  PixelFormat format;
  bool operator==(const SetPixelFormat&) const = default;
};
struct SetEncodings {
  std::vector<std::int32_t> encodings;
  bool operator==(const SetEncodings&) const = default;
};
struct FramebufferUpdateRequest {
  bool incremental = false;
  Rect rect;
  bool operator==(const FramebufferUpdateRequest&) const = default;
};
struct KeyEvent {
  bool down = false;
  std::uint32_t keysym = 0;
  bool operator==(const KeyEvent&) const = default;
};
struct PointerEvent {
  std::uint8_t button_mask = 0;
  std::uint16_t x = 0;
  std::uint16_t y = 0;
  bool operator==(const PointerEvent&) const = default;
};
struct ClientCutText {
  std::string text;
  bool operator==(const ClientCutText&) const = default;
};

using ClientMessage = std::variant<SetPixelFormat, SetEncodings, FramebufferUpdateRequest,
                                   KeyEvent, PointerEvent, ClientCutText>;

// Server to client.
struct FramebufferUpdate {
  std::vector<RectUpdate> rects;
  bool operator==(const FramebufferUpdate&) const = default;
};
struct SetColourMapEntries {
  std::uint16_t first = 0;
  std::vector<std::array<std::uint16_t, 3>> colours;
  bool operator==(const SetColourMapEntries&) const = default;
};
struct Bell {
  bool operator==(const Bell&) const = default;
};
struct ServerCutText {
  std::string text;
  bool operator==(const ServerCutText&) const = default;
};

using ServerMessage = std::variant<FramebufferUpdate, SetColourMapEntries, Bell, ServerCutText>;

inline constexpr std::size_t kPixelFormatSize = 16;

std::array<std::uint8_t, kPixelFormatSize> serialize_pixel_format(const PixelFormat& format);
// ProtocolError if the layout is not one we can handle.
PixelFormat parse_pixel_format(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> serialize(const ClientMessage& message);

// Consumes exactly one message. An unknown type byte raises ProtocolError
// after consuming only that byte. `raw`, if given, receives the message bytes.
ClientMessage read_client_message(Connection& conn, std::vector<std::uint8_t>* raw = nullptr);

std::vector<std::uint8_t> serialize_update(std::span<const RectUpdate> rects);
std::vector<std::uint8_t> serialize(const ServerMessage& message);

// Returns the number of bytes written.
std::size_t write_update(Connection& conn, std::span<const RectUpdate> rects);

// Reads one server message. Rectangle payloads are delimited using `format`
// but left encoded.
ServerMessage read_server_message(Connection& conn, const PixelFormat& format);

// Reads messages until a FramebufferUpdate, decodes every rectangle into fb
// in order and returns the rectangles with their wire payloads. Bell, cut
// text and colour map messages are discarded.
std::vector<RectUpdate> read_update(Connection& conn, codec::RectDecoder& decoder,
                                    Framebuffer& fb);

}  // namespace rfbkit::wire
