#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include "rfbkit/codec/zlib.hpp"
#include "rfbkit/model/encoding.hpp"
#include "rfbkit/model/framebuffer.hpp"

namespace rfbkit::codec {

struct EncodingChoice {
  Encoding encoding = Encoding::Raw;
  // Never fall back to Raw for a rectangle that encodes larger.
  bool strict = false;

  bool operator==(const EncodingChoice&) const = default;
};

// First client preference the server supports; Raw when none matches.
EncodingChoice negotiate_encoding(std::span<const std::int32_t> client_prefs,
                                  const std::set<Encoding>& server_supported, bool strict = false);

// Per-connection encoder: owns the compressing zlib stream.
class RectEncoder {
 public:
  explicit RectEncoder(EncodingChoice choice = {}, int zlib_level = 6);

  const EncodingChoice& choice() const { return choice_; }
  void set_choice(EncodingChoice choice) { choice_ = choice; }

  // Encodes r of fb. CopyRect is not a pixel encoding and is rejected here.
  RectUpdate encode(const Framebuffer& fb, const Rect& r);

 private:
  EncodingChoice choice_;
  ZlibDeflater zlib_;
};

// Per-connection decoder: owns the decompressing zlib stream.
class RectDecoder {
 public:
  // Decodes one rectangle into dst, whose format is the payload's format.
  void apply(const RectUpdate& update, Framebuffer& dst);

 private:
  ZlibInflater zlib_;
};

}  // namespace rfbkit::codec
