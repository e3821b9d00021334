#include "rfbkit/model/pixel_format.hpp"

#include <bit>
#include <sstream>

#include "rfbkit/model/error.hpp"

namespace rfbkit {
namespace {

int bit_width(std::uint16_t max) { return std::bit_width(static_cast<unsigned>(max)); }

// Channel maxima must be 2^n - 1 for the shift/mask model to hold.
bool is_mask(std::uint16_t max) { return (max & (max + 1u)) == 0; }

std::uint64_t channel_mask(std::uint16_t max, std::uint8_t shift) {
  return static_cast<std::uint64_t>(max) << shift;
}

std::string check(const PixelFormat& f) {
  if (f.bits_per_pixel != 8 && f.bits_per_pixel != 16 && f.bits_per_pixel != 32) {
    return "bits_per_pixel must be 8, 16 or 32";
  }
  if (f.depth == 0 || f.depth > f.bits_per_pixel) return "depth must be in 1..bits_per_pixel";
  if (!f.true_color) return "colour-map formats are not supported";
  const struct {
    const char* name;
    std::uint16_t max;
    std::uint8_t shift;
  } channels[] = {{"red", f.red_max, f.red_shift},
                  {"green", f.green_max, f.green_shift},
                  {"blue", f.blue_max, f.blue_shift}};
  for (const auto& c : channels) {
    if (c.max == 0 || !is_mask(c.max)) return std::string(c.name) + "_max must be 2^n-1";
    if (c.shift + bit_width(c.max) > f.bits_per_pixel) {
      return std::string(c.name) + " channel does not fit in bits_per_pixel";
    }
  }
  const auto r = channel_mask(f.red_max, f.red_shift);
  const auto g = channel_mask(f.green_max, f.green_shift);
  const auto b = channel_mask(f.blue_max, f.blue_shift);
  if ((r & g) || (r & b) || (g & b)) return "channel bit ranges overlap";
  return {};
}

std::uint32_t scale_channel(std::uint32_t v, std::uint32_t from_max, std::uint32_t to_max) {
  if (from_max == to_max) return v;
  return (v * to_max + from_max / 2) / from_max;
}

}  // namespace

void PixelFormat::validate() const {
  if (auto why = check(*this); !why.empty()) throw ConfigError("invalid pixel format: " + why);
}

bool PixelFormat::is_valid() const { return check(*this).empty(); }

std::string PixelFormat::describe() const {
  std::ostringstream os;
  os << int(bits_per_pixel) << "bpp depth " << int(depth) << (big_endian ? " BE" : " LE")
     << " rgb max " << red_max << '/' << green_max << '/' << blue_max << " shift "
     << int(red_shift) << '/' << int(green_shift) << '/' << int(blue_shift);
  return os.str();
}

std::vector<std::uint8_t> pixel_bytes(Pixel value, const PixelFormat& format) {
  if (value > format.max_value()) {
    throw RangeError("pixel value does not fit in " + std::to_string(format.bits_per_pixel) +
                     " bits");
  }
  std::vector<std::uint8_t> out;
  out.reserve(format.bytes_per_pixel());
  append_pixel(out, value, format);
  return out;
}

Pixel bytes_to_pixel(std::span<const std::uint8_t> bytes, const PixelFormat& format) {
  if (bytes.size() != static_cast<std::size_t>(format.bytes_per_pixel())) {
    throw FramingError("pixel needs exactly " + std::to_string(format.bytes_per_pixel()) +
                       " bytes");
  }
  return read_pixel(bytes.data(), format);
}

Pixel make_pixel(std::uint8_t r, std::uint8_t g, std::uint8_t b, const PixelFormat& format) {
  return scale_channel(r, 255, format.red_max) << format.red_shift |
         scale_channel(g, 255, format.green_max) << format.green_shift |
         scale_channel(b, 255, format.blue_max) << format.blue_shift;
}

Pixel translate_pixel(Pixel value, const PixelFormat& from, const PixelFormat& to) {
  if (from == to) return value;
  const std::uint32_t r = (value >> from.red_shift) & from.red_max;
  const std::uint32_t g = (value >> from.green_shift) & from.green_max;
  const std::uint32_t b = (value >> from.blue_shift) & from.blue_max;
  return scale_channel(r, from.red_max, to.red_max) << to.red_shift |
         scale_channel(g, from.green_max, to.green_max) << to.green_shift |
         scale_channel(b, from.blue_max, to.blue_max) << to.blue_shift;
}

}  // namespace rfbkit
