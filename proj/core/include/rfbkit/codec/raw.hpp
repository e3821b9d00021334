#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rfbkit/model/framebuffer.hpp"

namespace rfbkit::codec {

// w*h pixel values, left-to-right, top-to-bottom, in the framebuffer's format.
std::vector<std::uint8_t> encode_raw(const Framebuffer& fb, const Rect& r);

void decode_raw(std::span<const std::uint8_t> payload, const Rect& r, const PixelFormat& format,
                Framebuffer& dst);

std::size_t raw_size(const Rect& r, const PixelFormat& format);

// Shared argument checks for every codec.
void check_source_rect(const Framebuffer& fb, const Rect& r);
void check_target(const Rect& r, const PixelFormat& format, const Framebuffer& dst);

}  // namespace rfbkit::codec
