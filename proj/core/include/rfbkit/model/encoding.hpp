#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "rfbkit/model/rect.hpp"

namespace rfbkit {

enum class Encoding : std::int32_t {
  Raw = 0,
  CopyRect = 1,
  RRE = 2,
  Hextile = 5,
  Zlib = 6,
};

std::optional<Encoding> encoding_from_id(std::int32_t id);
std::optional<Encoding> encoding_from_name(std::string_view name);
std::string_view encoding_name(Encoding encoding);

// One rectangle of a framebuffer update: header fields plus encoded payload.
struct RectUpdate {
  Rect rect;
  std::int32_t encoding_id = 0;
  std::vector<std::uint8_t> payload;

  Encoding encoding() const { return static_cast<Encoding>(encoding_id); }
  bool operator==(const RectUpdate&) const = default;
};

}  // namespace rfbkit
