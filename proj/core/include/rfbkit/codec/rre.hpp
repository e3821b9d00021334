#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rfbkit/model/framebuffer.hpp"

namespace rfbkit::codec {

struct SolidRect {
  Rect rect;  // relative to the encoded rectangle
  Pixel value = 0;
};

// Most frequent value in r; ties go to the lowest value.
Pixel dominant_pixel(const Framebuffer& fb, const Rect& r);

// Covers every pixel of r that differs from `background` with solid
// subrectangles, scanning row-major and growing each horizontal run
// downwards while the rows below match.
std::vector<SolidRect> cover_foreground(const Framebuffer& fb, const Rect& r, Pixel background);

// count (u32) | background | count * (pixel | x y w h as u16).
std::vector<std::uint8_t> encode_rre(const Framebuffer& fb, const Rect& r);

void decode_rre(std::span<const std::uint8_t> payload, const Rect& r, const PixelFormat& format,
                Framebuffer& dst);

}  // namespace rfbkit::codec
