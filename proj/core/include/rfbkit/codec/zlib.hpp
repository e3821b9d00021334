#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "rfbkit/model/framebuffer.hpp"

namespace rfbkit::codec {

// Compressing half of a persistent per-connection zlib stream. Never reset;
// every call ends with a sync flush so the peer can decode without lookahead.
class ZlibDeflater {
 public:
  explicit ZlibDeflater(int level = 6);
  ~ZlibDeflater();
  ZlibDeflater(ZlibDeflater&&) noexcept;
  ZlibDeflater& operator=(ZlibDeflater&&) noexcept;

  std::vector<std::uint8_t> compress(std::span<const std::uint8_t> input);
  int level() const { return level_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int level_;
};

// Decompressing half. Updates must be fed in the order they were produced.
class ZlibInflater {
 public:
  ZlibInflater();
  ~ZlibInflater();
  ZlibInflater(ZlibInflater&&) noexcept;
  ZlibInflater& operator=(ZlibInflater&&) noexcept;

  // Inflates `input` into exactly out.size() bytes. DecompressionError on a
  // corrupt stream, FramingError if the body yields more or fewer bytes.
  void decompress_exact(std::span<const std::uint8_t> input, std::span<std::uint8_t> out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// compressed length (u32) | compressed raw pixel data of r.
std::vector<std::uint8_t> encode_zlib(const Framebuffer& fb, const Rect& r, ZlibDeflater& stream);

void decode_zlib(std::span<const std::uint8_t> payload, const Rect& r, const PixelFormat& format,
                 Framebuffer& dst, ZlibInflater& stream);

}  // namespace rfbkit::codec
