#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rfbkit/model/framebuffer.hpp"

namespace rfbkit::codec {

namespace hextile {
inline constexpr int kTileSize = 16;
inline constexpr std::uint8_t kRaw = 1;
inline constexpr std::uint8_t kBackgroundSpecified = 2;
inline constexpr std::uint8_t kForegroundSpecified = 4;
inline constexpr std::uint8_t kAnySubrects = 8;
inline constexpr std::uint8_t kSubrectsColoured = 16;
}  // namespace hextile

// Tiles of r in emission order: row-major, the last column/row clipped.
std::vector<Rect> hextile_tiles(const Rect& r);

// Background and foreground carried from tile to tile. Reset at the start of
// every rectangle.
struct HextileCarry {
  bool has_background = false;
  bool has_foreground = false;
  Pixel background = 0;
  Pixel foreground = 0;
};

std::vector<std::uint8_t> encode_hextile(const Framebuffer& fb, const Rect& r);

void decode_hextile(std::span<const std::uint8_t> payload, const Rect& r,
                    const PixelFormat& format, Framebuffer& dst);

}  // namespace rfbkit::codec
