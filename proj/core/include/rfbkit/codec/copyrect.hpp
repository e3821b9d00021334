#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "rfbkit/model/framebuffer.hpp"

namespace rfbkit::codec {

// Source position, big-endian x then y. Throws RangeError outside 0..65535.
std::array<std::uint8_t, 4> encode_copyrect(int src_x, int src_y);

struct CopySource {
  int x = 0;
  int y = 0;
};
CopySource decode_copyrect(std::span<const std::uint8_t> payload);

// Copies (src_x, src_y, dst.w, dst.h) onto dst as the source looked before
// the call, so overlapping moves are safe.
void apply_copyrect(Framebuffer& fb, const Rect& dst, int src_x, int src_y);

}  // namespace rfbkit::codec
