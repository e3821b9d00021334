#include "rfbkit/accel/transcode.hpp"

#include <sstream>

#include "rfbkit/model/error.hpp"

namespace rfbkit::accel {

DamageRegion absorb_update(Framebuffer& shadow, std::span<const RectUpdate> incoming,
                           codec::RectDecoder& decoder) {
  std::vector<Rect> touched;
  touched.reserve(incoming.size());
  for (const RectUpdate& u : incoming) {
    if (!shadow.contains(u.rect)) {
      std::ostringstream msg;
      msg << "incoming rectangle " << u.rect << " outside the " << shadow.width() << 'x'
          << shadow.height() << " screen";
      throw BoundsError(msg.str());
    }
    decoder.apply(u, shadow);
    touched.push_back(u.rect);
  }
  return normalize_unchecked(touched);
}

std::vector<RectUpdate> transcode_update(Framebuffer& shadow, std::span<const RectUpdate> incoming,
                                         codec::RectDecoder& decoder, codec::RectEncoder& target) {
  const DamageRegion region = absorb_update(shadow, incoming, decoder);
  std::vector<RectUpdate> out;
  out.reserve(region.size());
  for (const Rect& r : region.rects()) out.push_back(target.encode(shadow, r));
  return out;
}

}  // namespace rfbkit::accel
