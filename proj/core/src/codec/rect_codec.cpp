#include "rfbkit/codec/rect_codec.hpp"

#include "rfbkit/codec/copyrect.hpp"
#include "rfbkit/model/error.hpp"
#include "rfbkit/codec/hextile.hpp"
#include "rfbkit/codec/raw.hpp"
#include "rfbkit/codec/rre.hpp"

namespace rfbkit::codec {

EncodingChoice negotiate_encoding(std::span<const std::int32_t> client_prefs,
                                  const std::set<Encoding>& server_supported, bool strict) {
  for (const std::int32_t id : client_prefs) {
    const auto e = encoding_from_id(id);
    // CopyRect is a move hint, not a way to carry pixels.
    if (e && *e != Encoding::CopyRect && server_supported.contains(*e)) return {*e, strict};
  }
  return {Encoding::Raw, strict};
}

RectEncoder::RectEncoder(EncodingChoice choice, int zlib_level)
    : choice_(choice), zlib_(zlib_level) {}

RectUpdate RectEncoder::encode(const Framebuffer& fb, const Rect& r) {
  RectUpdate u{r, static_cast<std::int32_t>(choice_.encoding), {}};
  switch (choice_.encoding) {
    case Encoding::Raw:
      u.payload = encode_raw(fb, r);
      return u;
    case Encoding::RRE:
      u.payload = encode_rre(fb, r);
      break;
    case Encoding::Hextile:
      u.payload = encode_hextile(fb, r);
      break;
    case Encoding::Zlib:
      // No fallback: the compressor has already consumed these pixels and
      // the peer's stream must see them.
      u.payload = encode_zlib(fb, r, zlib_);
      return u;
    case Encoding::CopyRect:
      throw PreconditionError("CopyRect cannot encode pixel data");
  }
  if (!choice_.strict && u.payload.size() > raw_size(r, fb.format())) {
    u.encoding_id = static_cast<std::int32_t>(Encoding::Raw);
    u.payload = encode_raw(fb, r);
  }
  return u;
}

void RectDecoder::apply(const RectUpdate& update, Framebuffer& dst) {
  const auto e = encoding_from_id(update.encoding_id);
  if (!e) throw ProtocolError("unsupported encoding id " + std::to_string(update.encoding_id));
  const PixelFormat& format = dst.format();
  switch (*e) {
    case Encoding::Raw:
      decode_raw(update.payload, update.rect, format, dst);
      break;
    case Encoding::CopyRect: {
      const auto src = decode_copyrect(update.payload);
      apply_copyrect(dst, update.rect, src.x, src.y);
      break;
    }
    case Encoding::RRE:
      decode_rre(update.payload, update.rect, format, dst);
      break;
    case Encoding::Hextile:
      decode_hextile(update.payload, update.rect, format, dst);
      break;
    case Encoding::Zlib:
      decode_zlib(update.payload, update.rect, format, dst, zlib_);
      break;
  }
}

}  // namespace rfbkit::codec
