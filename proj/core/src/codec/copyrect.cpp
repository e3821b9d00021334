#include "rfbkit/codec/copyrect.hpp"

#include <algorithm>
#include <sstream>

#include "rfbkit/codec/byte_io.hpp"
#include "rfbkit/codec/raw.hpp"

namespace rfbkit::codec {

std::array<std::uint8_t, 4> encode_copyrect(int src_x, int src_y) {
  if (src_x < 0 || src_y < 0 || src_x > 0xFFFF || src_y > 0xFFFF) {
    throw RangeError("CopyRect source must fit in 16 bits");
  }
  return {static_cast<std::uint8_t>(src_x >> 8), static_cast<std::uint8_t>(src_x),
          static_cast<std::uint8_t>(src_y >> 8), static_cast<std::uint8_t>(src_y)};
}

CopySource decode_copyrect(std::span<const std::uint8_t> payload) {
  ByteCursor in(payload, "CopyRect payload");
  CopySource s{in.u16(), in.u16()};
  in.expect_end();
  return s;
}

void apply_copyrect(Framebuffer& fb, const Rect& dst, int src_x, int src_y) {
  check_source_rect(fb, dst);
  const Rect src{src_x, src_y, dst.w, dst.h};
  if (!fb.contains(src)) {
    std::ostringstream os;
    os << "CopyRect source " << src << " is outside the framebuffer";
    throw BoundsError(os.str());
  }
  // Walk rows away from the overlap so every source row is read before it is overwritten.
  const bool bottom_up = src_y < dst.y;
  for (int i = 0; i < dst.h; ++i) {
    const int row = bottom_up ? dst.h - 1 - i : i;
    auto from = fb.row(src_y + row).subspan(static_cast<std::size_t>(src_x), dst.w);
    auto to = fb.row(dst.y + row).subspan(static_cast<std::size_t>(dst.x), dst.w);
    if (src_y == dst.y && src_x < dst.x) {
      std::copy_backward(from.begin(), from.end(), to.end());
    } else {
      std::copy(from.begin(), from.end(), to.begin());
    }
  }
}

}  // namespace rfbkit::codec
