#include "rfbkit/model/encoding.hpp"

#include <array>
#include <utility>

namespace rfbkit {
namespace {

constexpr std::array<std::pair<Encoding, std::string_view>, 5> kNames{{
    {Encoding::Raw, "raw"},
    {Encoding::CopyRect, "copyrect"},
    {Encoding::RRE, "rre"},
    {Encoding::Hextile, "hextile"},
    {Encoding::Zlib, "zlib"},
}};

}  // namespace

std::optional<Encoding> encoding_from_id(std::int32_t id) {
  for (const auto& [e, name] : kNames) {
    if (static_cast<std::int32_t>(e) == id) return e;
  }
  return std::nullopt;
}

std::optional<Encoding> encoding_from_name(std::string_view name) {
  for (const auto& [e, n] : kNames) {
    if (n == name) return e;
  }
  return std::nullopt;
}

std::string_view encoding_name(Encoding encoding) {
  for (const auto& [e, n] : kNames) {
    if (e == encoding) return n;
  }
  return "unknown";
}

}  // namespace rfbkit
