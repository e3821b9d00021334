#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rfbkit {

using Pixel = std::uint32_t;

// True-colour pixel layout as carried in the 16-byte wire structure.
struct PixelFormat {
  std::uint8_t bits_per_pixel = 32;
  std::uint8_t depth = 24;
  bool big_endian = false;
  bool true_color = true;
  std::uint16_t red_max = 255;
  std::uint16_t green_max = 255;
  std::uint16_t blue_max = 255;
  std::uint8_t red_shift = 16;
  std::uint8_t green_shift = 8;
  std::uint8_t blue_shift = 0;

  // 32bpp, depth 24, little-endian, 8 bits per channel at shifts 16/8/0.
  static PixelFormat standard() { return {}; }

  int bytes_per_pixel() const { return bits_per_pixel / 8; }

  // Largest pixel value representable in bits_per_pixel bits.
  Pixel max_value() const {
    return bits_per_pixel >= 32 ? 0xFFFFFFFFu : (Pixel{1} << bits_per_pixel) - 1;
  }

  // Throws ConfigError if the layout is inconsistent.
  void validate() const;
  bool is_valid() const;

  std::string describe() const;

  bool operator==(const PixelFormat&) const = default;
};

// Serializes one pixel value in the format's byte order.
// Throws RangeError if the value does not fit in bits_per_pixel bits.
std::vector<std::uint8_t> pixel_bytes(Pixel value, const PixelFormat& format);

// Appends the pixel without a range check; hot path for encoders.
inline void append_pixel(std::vector<std::uint8_t>& out, Pixel value, const PixelFormat& format) {
  switch (format.bits_per_pixel) {
    case 8:
      out.push_back(static_cast<std::uint8_t>(value));
      break;
    case 16:
      if (format.big_endian) {
        out.push_back(static_cast<std::uint8_t>(value >> 8));
        out.push_back(static_cast<std::uint8_t>(value));
      } else {
        out.push_back(static_cast<std::uint8_t>(value));
        out.push_back(static_cast<std::uint8_t>(value >> 8));
      }
      break;
    default:
      if (format.big_endian) {
        out.push_back(static_cast<std::uint8_t>(value >> 24));
        out.push_back(static_cast<std::uint8_t>(value >> 16));
        out.push_back(static_cast<std::uint8_t>(value >> 8));
        out.push_back(static_cast<std::uint8_t>(value));
      } else {
        out.push_back(static_cast<std::uint8_t>(value));
        out.push_back(static_cast<std::uint8_t>(value >> 8));
        out.push_back(static_cast<std::uint8_t>(value >> 16));
        out.push_back(static_cast<std::uint8_t>(value >> 24));
      }
      break;
  }
}

// Reads one pixel; `bytes` must hold at least bytes_per_pixel bytes.
inline Pixel read_pixel(const std::uint8_t* bytes, const PixelFormat& format) {
  switch (format.bits_per_pixel) {
    case 8:
      return bytes[0];
    case 16:
      return format.big_endian ? Pixel(bytes[0]) << 8 | bytes[1]
                               : Pixel(bytes[1]) << 8 | bytes[0];
    default:
      return format.big_endian
                 ? Pixel(bytes[0]) << 24 | Pixel(bytes[1]) << 16 | Pixel(bytes[2]) << 8 | bytes[3]
                 : Pixel(bytes[3]) << 24 | Pixel(bytes[2]) << 16 | Pixel(bytes[1]) << 8 | bytes[0];
  }
}

// Inverse of pixel_bytes. Throws FramingError unless exactly bytes_per_pixel bytes are given.
Pixel bytes_to_pixel(std::span<const std::uint8_t> bytes, const PixelFormat& format);

// Builds a pixel from 8-bit channel intensities.
Pixel make_pixel(std::uint8_t r, std::uint8_t g, std::uint8_t b, const PixelFormat& format);

// Converts a pixel between true-colour layouts, rescaling each channel.
Pixel translate_pixel(Pixel value, const PixelFormat& from, const PixelFormat& to);

}  // namespace rfbkit
