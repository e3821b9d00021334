#pragma once

#include <span>
#include <vector>

#include "rfbkit/codec/rect_codec.hpp"
#include "rfbkit/model/framebuffer.hpp"
#include "rfbkit/model/region.hpp"

namespace rfbkit::accel {

// Decodes every incoming rectangle into the shadow, in order, and returns
// the union of their rectangles. BoundsError for a rectangle outside the
// shadow.
DamageRegion absorb_update(Framebuffer& shadow, std::span<const RectUpdate> incoming,
                           codec::RectDecoder& decoder);

// absorb_update, then re-encodes the union of the incoming rectangles from
// the shadow with `target`. CopyRect arrives as pixels of its destination.
std::vector<RectUpdate> transcode_update(Framebuffer& shadow, std::span<const RectUpdate> incoming,
                                         codec::RectDecoder& decoder, codec::RectEncoder& target);

}  // namespace rfbkit::accel
