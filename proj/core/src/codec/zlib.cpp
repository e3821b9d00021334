#include "rfbkit/codec/zlib.hpp"

#include <zlib.h>

#include "rfbkit/codec/byte_io.hpp"
#include "rfbkit/codec/raw.hpp"

namespace rfbkit::codec {

struct ZlibDeflater::Impl {
  z_stream z{};
  ~Impl() { deflateEnd(&z); }
};

ZlibDeflater::ZlibDeflater(int level) : impl_(std::make_unique<Impl>()), level_(level) {
  if (level < 0 || level > 9) throw ConfigError("zlib level must be 0..9");
  if (deflateInit(&impl_->z, level) != Z_OK) throw Error("deflateInit failed");
}

ZlibDeflater::~ZlibDeflater() = default;
ZlibDeflater::ZlibDeflater(ZlibDeflater&&) noexcept = default;
ZlibDeflater& ZlibDeflater::operator=(ZlibDeflater&&) noexcept = default;

std::vector<std::uint8_t> ZlibDeflater::compress(std::span<const std::uint8_t> input) {
  z_stream& z = impl_->z;
  std::vector<std::uint8_t> out(deflateBound(&z, static_cast<uLong>(input.size())) + 16);
  z.next_in = const_cast<Bytef*>(input.data());
  z.avail_in = static_cast<uInt>(input.size());
  std::size_t produced = 0;
  for (;;) {
    if (produced == out.size()) out.resize(out.size() * 2);
    z.next_out = out.data() + produced;
    z.avail_out = static_cast<uInt>(out.size() - produced);
    const int rc = deflate(&z, Z_SYNC_FLUSH);
    produced = out.size() - z.avail_out;
    if (rc != Z_OK && rc != Z_BUF_ERROR) throw Error("deflate failed");
    // A sync flush is complete once deflate leaves output space unused.
    if (z.avail_in == 0 && z.avail_out != 0) break;
  }
  out.resize(produced);
  return out;
}

struct ZlibInflater::Impl {
  z_stream z{};
  ~Impl() { inflateEnd(&z); }
};

ZlibInflater::ZlibInflater() : impl_(std::make_unique<Impl>()) {
  if (inflateInit(&impl_->z) != Z_OK) throw Error("inflateInit failed");
}

ZlibInflater::~ZlibInflater() = default;
ZlibInflater::ZlibInflater(ZlibInflater&&) noexcept = default;
ZlibInflater& ZlibInflater::operator=(ZlibInflater&&) noexcept = default;

void ZlibInflater::decompress_exact(std::span<const std::uint8_t> input,
                                    std::span<std::uint8_t> out) {
  z_stream& z = impl_->z;
  z.next_in = const_cast<Bytef*>(input.data());
  z.avail_in = static_cast<uInt>(input.size());
  std::size_t produced = 0;
  std::uint8_t spill = 0;

  while (z.avail_in > 0) {
    // One spare byte past the end detects bodies that inflate to too much.
    const bool full = produced == out.size();
    z.next_out = full ? &spill : out.data() + produced;
    z.avail_out = full ? 1 : static_cast<uInt>(out.size() - produced);
    const uInt before_in = z.avail_in;
    const uInt before_out = z.avail_out;
    const int rc = inflate(&z, Z_SYNC_FLUSH);
    if (rc == Z_NEED_DICT || rc == Z_DATA_ERROR || rc == Z_STREAM_ERROR || rc == Z_MEM_ERROR) {
      throw DecompressionError(std::string("zlib stream is corrupt: ") +
                               (z.msg ? z.msg : "inflate failed"));
    }
    if (full) {
      if (z.avail_out == 0) throw FramingError("zlib body inflates past the rectangle size");
    } else {
      produced = out.size() - z.avail_out;
    }
    if (rc == Z_STREAM_END) break;
    if (z.avail_in == before_in && z.avail_out == before_out) break;
  }
  if (produced != out.size()) {
    throw FramingError("zlib body is truncated: " + std::to_string(produced) + " of " +
                       std::to_string(out.size()) + " bytes");
  }
  if (z.avail_in != 0) throw FramingError("zlib body has unconsumed trailing bytes");
}

std::vector<std::uint8_t> encode_zlib(const Framebuffer& fb, const Rect& r, ZlibDeflater& stream) {
  const auto raw = encode_raw(fb, r);
  const auto compressed = stream.compress(raw);
  std::vector<std::uint8_t> out;
  out.reserve(4 + compressed.size());
  put_u32(out, static_cast<std::uint32_t>(compressed.size()));
  put_bytes(out, compressed);
  return out;
}

void decode_zlib(std::span<const std::uint8_t> payload, const Rect& r, const PixelFormat& format,
                 Framebuffer& dst, ZlibInflater& stream) {
  check_target(r, format, dst);
  ByteCursor in(payload, "Zlib payload");
  const std::uint32_t length = in.u32();
  if (in.remaining() != length) {
    throw FramingError("Zlib length field says " + std::to_string(length) + " bytes, payload has " +
                       std::to_string(in.remaining()));
  }
  std::vector<std::uint8_t> raw(raw_size(r, format));
  stream.decompress_exact(in.bytes(length), raw);
  decode_raw(raw, r, format, dst);
}

}  // namespace rfbkit::codec
