#include "rfbkit/wire/messages.hpp"

#include "rfbkit/codec/byte_io.hpp"
#include "rfbkit/codec/hextile.hpp"
#include "rfbkit/codec/raw.hpp"
#include "rfbkit/model/error.hpp"
#include "rfbkit/wire/stream_reader.hpp"

namespace rfbkit::wire {
namespace {

constexpr std::uint32_t kMaxCutText = 16u << 20;

enum ClientType : std::uint8_t {
  kSetPixelFormat = 0,
  kSetEncodings = 2,
  kFramebufferUpdateRequest = 3,
  kKeyEvent = 4,
  kPointerEvent = 5,
  kClientCutText = 6,
};

enum ServerType : std::uint8_t {
  kFramebufferUpdate = 0,
  kSetColourMapEntries = 1,
  kBell = 2,
  kServerCutText = 3,
};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string read_text(StreamReader& in) {
  const std::uint32_t len = in.u32();
  if (len > kMaxCutText) throw ProtocolError("cut text of " + std::to_string(len) + " bytes");
  const auto bytes = in.bytes(len);
  return {bytes.begin(), bytes.end()};
}

void put_text(std::vector<std::uint8_t>& out, const std::string& text) {
  put_u32(out, static_cast<std::uint32_t>(text.size()));
  out.insert(out.end(), text.begin(), text.end());
}

// Reads exactly the payload of one rectangle without decoding it.
std::vector<std::uint8_t> read_rect_payload(StreamReader& in, Encoding encoding, const Rect& r,
                                            const PixelFormat& format) {
  const std::size_t bpp = static_cast<std::size_t>(format.bytes_per_pixel());
  std::vector<std::uint8_t> payload;
  switch (encoding) {
    case Encoding::Raw:
      in.append(payload, codec::raw_size(r, format));
      break;
    case Encoding::CopyRect:
      in.append(payload, 4);
      break;
    case Encoding::RRE: {
      in.append(payload, 4);
      const std::uint32_t count = ByteCursor(payload).u32();
      const std::uint64_t rest = bpp + std::uint64_t{count} * (bpp + 8);
      if (count > static_cast<std::uint64_t>(r.area())) {
        throw ProtocolError("RRE rectangle claims more subrects than pixels");
      }
      in.append(payload, static_cast<std::size_t>(rest));
      break;
    }
    case Encoding::Hextile:
      for (const Rect& t : codec::hextile_tiles(r)) {
        const std::uint8_t mask = in.u8();
        payload.push_back(mask);
        if (mask & codec::hextile::kRaw) {
          in.append(payload, codec::raw_size(t, format));
          continue;
        }
        if (mask & codec::hextile::kBackgroundSpecified) in.append(payload, bpp);
        if (mask & codec::hextile::kForegroundSpecified) in.append(payload, bpp);
        if (mask & codec::hextile::kAnySubrects) {
          const std::uint8_t count = in.u8();
          payload.push_back(count);
          const std::size_t each = (mask & codec::hextile::kSubrectsColoured) ? bpp + 2 : 2;
          in.append(payload, count * each);
        }
      }
      break;
    case Encoding::Zlib: {
      in.append(payload, 4);
      const std::uint32_t length = ByteCursor(payload).u32();
      // A compressed body can legitimately be a little larger than the raw data.
      if (length > codec::raw_size(r, format) + (codec::raw_size(r, format) >> 3) + 1024) {
        throw ProtocolError("Zlib rectangle length " + std::to_string(length) + " is implausible");
      }
      in.append(payload, length);
      break;
    }
  }
  return payload;
}

}  // namespace

std::uint8_t StreamReader::u8() {
  std::uint8_t b;
  read({&b, 1});
  return b;
}

std::uint16_t StreamReader::u16() {
  std::uint8_t b[2];
  read(b);
  return static_cast<std::uint16_t>(b[0] << 8 | b[1]);
}

std::uint32_t StreamReader::u32() {
  std::uint8_t b[4];
  read(b);
  return std::uint32_t(b[0]) << 24 | std::uint32_t(b[1]) << 16 | std::uint32_t(b[2]) << 8 | b[3];
}

void StreamReader::read(std::span<std::uint8_t> buf) {
  conn_.read_exact(buf);
  if (capture_) capture_->insert(capture_->end(), buf.begin(), buf.end());
}

std::vector<std::uint8_t> StreamReader::bytes(std::size_t n) {
  std::vector<std::uint8_t> out(n);
  if (n) read(out);
  return out;
}

void StreamReader::skip(std::size_t n) { bytes(n); }

void StreamReader::append(std::vector<std::uint8_t>& out, std::size_t n) {
  const std::size_t at = out.size();
  out.resize(at + n);
  if (n) read({out.data() + at, n});
}

std::array<std::uint8_t, kPixelFormatSize> serialize_pixel_format(const PixelFormat& f) {
  return {f.bits_per_pixel,
          f.depth,
          std::uint8_t(f.big_endian ? 1 : 0),
          std::uint8_t(f.true_color ? 1 : 0),
          std::uint8_t(f.red_max >> 8),
          std::uint8_t(f.red_max),
          std::uint8_t(f.green_max >> 8),
          std::uint8_t(f.green_max),
          std::uint8_t(f.blue_max >> 8),
          std::uint8_t(f.blue_max),
          f.red_shift,
          f.green_shift,
          f.blue_shift,
          0,
          0,
          0};
}

PixelFormat parse_pixel_format(std::span<const std::uint8_t> bytes) {
  ByteCursor in(bytes, "pixel format");
  PixelFormat f;
  f.bits_per_pixel = in.u8();
  f.depth = in.u8();
  f.big_endian = in.u8() != 0;
  f.true_color = in.u8() != 0;
  f.red_max = in.u16();
  f.green_max = in.u16();
  f.blue_max = in.u16();
  f.red_shift = in.u8();
  f.green_shift = in.u8();
  f.blue_shift = in.u8();
  in.bytes(3);
  in.expect_end();
  if (!f.is_valid()) {
    try {
      f.validate();
    } catch (const ConfigError& e) {
      throw ProtocolError(e.what());
    }
  }
  return f;
}

std::vector<std::uint8_t> serialize(const ClientMessage& message) {
  std::vector<std::uint8_t> out;
  std::visit(
      Overloaded{
          [&](const SetPixelFormat& m) {
            put_u8(out, kSetPixelFormat);
            put_padding(out, 3);
            put_bytes(out, serialize_pixel_format(m.format));
          },
          [&](const SetEncodings& m) {
            put_u8(out, kSetEncodings);
            put_padding(out, 1);
            put_u16(out, static_cast<std::uint16_t>(m.encodings.size()));
            for (std::int32_t e : m.encodings) put_s32(out, e);
          },
          [&](const FramebufferUpdateRequest& m) {
            put_u8(out, kFramebufferUpdateRequest);
            put_u8(out, m.incremental ? 1 : 0);
            put_u16(out, static_cast<std::uint16_t>(m.rect.x));
            put_u16(out, static_cast<std::uint16_t>(m.rect.y));
            put_u16(out, static_cast<std::uint16_t>(m.rect.w));
            put_u16(out, static_cast<std::uint16_t>(m.rect.h));
          },
          [&](const KeyEvent& m) {
            put_u8(out, kKeyEvent);
            put_u8(out, m.down ? 1 : 0);
            put_padding(out, 2);
            put_u32(out, m.keysym);
          },
          [&](const PointerEvent& m) {
            put_u8(out, kPointerEvent);
            put_u8(out, m.button_mask);
            put_u16(out, m.x);
            put_u16(out, m.y);
          },
          [&](const ClientCutText& m) {
            put_u8(out, kClientCutText);
            put_padding(out, 3);
            put_text(out, m.text);
          },
      },
      message);
  return out;
}

ClientMessage read_client_message(Connection& conn, std::vector<std::uint8_t>* raw) {
  if (raw) raw->clear();
  StreamReader in(conn, raw);
  const std::uint8_t type = in.u8();
  switch (type) {
    case kSetPixelFormat: {
      in.skip(3);
      const auto bytes = in.bytes(kPixelFormatSize);
      return SetPixelFormat{parse_pixel_format(bytes)};
    }
    case kSetEncodings: {
      in.skip(1);
      const std::uint16_t n = in.u16();
      SetEncodings m;
      m.encodings.reserve(n);
      for (std::uint16_t i = 0; i < n; ++i) m.encodings.push_back(in.s32());
      return m;
    }
    case kFramebufferUpdateRequest: {
      FramebufferUpdateRequest m;
      m.incremental = in.u8() != 0;
      m.rect.x = in.u16();
      m.rect.y = in.u16();
      m.rect.w = in.u16();
      m.rect.h = in.u16();
      return m;
    }
    case kKeyEvent: {
      KeyEvent m;
      m.down = in.u8() != 0;
      in.skip(2);
      m.keysym = in.u32();
      return m;
    }
    case kPointerEvent: {
      PointerEvent m;
      m.button_mask = in.u8();
      m.x = in.u16();
      m.y = in.u16();
      return m;
    }
    case kClientCutText: {
      in.skip(3);
      return ClientCutText{read_text(in)};
    }
    default:
      throw ProtocolError("unknown client message type " + std::to_string(type));
  }
}

std::vector<std::uint8_t> serialize_update(std::span<const RectUpdate> rects) {
  if (rects.size() > 0xFFFF) throw RangeError("too many rectangles for one update");
  std::size_t total = 4;
  for (const auto& r : rects) total += 12 + r.payload.size();
  std::vector<std::uint8_t> out;
  out.reserve(total);
  put_u8(out, kFramebufferUpdate);
  put_padding(out, 1);
  put_u16(out, static_cast<std::uint16_t>(rects.size()));
  for (const auto& r : rects) {
    if (!r.rect.wire_valid()) throw RangeError("rectangle does not fit the wire header");
    put_u16(out, static_cast<std::uint16_t>(r.rect.x));
    put_u16(out, static_cast<std::uint16_t>(r.rect.y));
    put_u16(out, static_cast<std::uint16_t>(r.rect.w));
    put_u16(out, static_cast<std::uint16_t>(r.rect.h));
    put_s32(out, r.encoding_id);
    put_bytes(out, r.payload);
  }
  return out;
}

std::vector<std::uint8_t> serialize(const ServerMessage& message) {
  std::vector<std::uint8_t> out;
  std::visit(Overloaded{
                 [&](const FramebufferUpdate& m) { out = serialize_update(m.rects); },
                 [&](const SetColourMapEntries& m) {
                   put_u8(out, kSetColourMapEntries);
                   put_padding(out, 1);
                   put_u16(out, m.first);
                   put_u16(out, static_cast<std::uint16_t>(m.colours.size()));
                   for (const auto& c : m.colours) {
                     for (std::uint16_t v : c) put_u16(out, v);
                   }
                 },
                 [&](const Bell&) { put_u8(out, kBell); },
                 [&](const ServerCutText& m) {
                   put_u8(out, kServerCutText);
                   put_padding(out, 3);
                   put_text(out, m.text);
                 },
             },
             message);
  return out;
}

std::size_t write_update(Connection& conn, std::span<const RectUpdate> rects) {
  const auto bytes = serialize_update(rects);
  conn.write_all(bytes);
  return bytes.size();
}

ServerMessage read_server_message(Connection& conn, const PixelFormat& format) {
  StreamReader in(conn);
  const std::uint8_t type = in.u8();
  switch (type) {
    case kFramebufferUpdate: {
      in.skip(1);
      const std::uint16_t count = in.u16();
      FramebufferUpdate m;
      m.rects.reserve(count);
      for (std::uint16_t i = 0; i < count; ++i) {
        RectUpdate r;
        r.rect.x = in.u16();
        r.rect.y = in.u16();
        r.rect.w = in.u16();
        r.rect.h = in.u16();
        r.encoding_id = in.s32();
        const auto encoding = encoding_from_id(r.encoding_id);
        if (!encoding) {
          throw ProtocolError("unsupported encoding id " + std::to_string(r.encoding_id));
        }
        if (!r.rect.wire_valid()) throw ProtocolError("empty or overflowing rectangle header");
        r.payload = read_rect_payload(in, *encoding, r.rect, format);
        m.rects.push_back(std::move(r));
      }
      return m;
    }
    case kSetColourMapEntries: {
      in.skip(1);
      SetColourMapEntries m;
      m.first = in.u16();
      const std::uint16_t n = in.u16();
      for (std::uint16_t i = 0; i < n; ++i) m.colours.push_back({in.u16(), in.u16(), in.u16()});
      return m;
    }
    case kBell:
      return Bell{};
    case kServerCutText:
      in.skip(3);
      return ServerCutText{read_text(in)};
    default:
      throw ProtocolError("unknown server message type " + std::to_string(type));
  }
}

std::vector<RectUpdate> read_update(Connection& conn, codec::RectDecoder& decoder,
                                    Framebuffer& fb) {
  for (;;) {
    ServerMessage message = read_server_message(conn, fb.format());
    if (auto* update = std::get_if<FramebufferUpdate>(&message)) {
      for (const auto& r : update->rects) decoder.apply(r, fb);
      return std::move(update->rects);
    }
  }
}

}  // namespace rfbkit::wire
