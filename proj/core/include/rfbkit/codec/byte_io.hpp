#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rfbkit/model/error.hpp"
#include "rfbkit/model/pixel_format.hpp"

namespace rfbkit {

// Big-endian appenders.
inline void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v) { out.push_back(v); }
inline void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}
inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}
inline void put_s32(std::vector<std::uint8_t>& out, std::int32_t v) {
  put_u32(out, static_cast<std::uint32_t>(v));
}
inline void put_bytes(std::vector<std::uint8_t>& out, std::span<const std::uint8_t> bytes) {
  out.insert(out.end(), bytes.begin(), bytes.end());
}
inline void put_padding(std::vector<std::uint8_t>& out, std::size_t n) {
  out.insert(out.end(), n, std::uint8_t{0});
}

// Bounds-checked cursor over a payload; running off the end is a FramingError.
class ByteCursor {
 public:
  explicit ByteCursor(std::span<const std::uint8_t> data, const char* what = "payload")
      : data_(data), what_(what) {}

  std::size_t remaining() const { return data_.size() - pos_; }
  std::size_t position() const { return pos_; }
  bool at_end() const { return pos_ == data_.size(); }

  std::uint8_t u8() {
    need(1);
    return data_[pos_++];
  }
  std::uint16_t u16() {
    need(2);
    const std::uint16_t v = std::uint16_t(data_[pos_] << 8 | data_[pos_ + 1]);
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    const std::uint32_t v = std::uint32_t(data_[pos_]) << 24 | std::uint32_t(data_[pos_ + 1]) << 16 |
                            std::uint32_t(data_[pos_ + 2]) << 8 | data_[pos_ + 3];
    pos_ += 4;
    return v;
  }
  Pixel pixel(const PixelFormat& format) {
    const auto n = static_cast<std::size_t>(format.bytes_per_pixel());
    need(n);
    const Pixel p = read_pixel(data_.data() + pos_, format);
    pos_ += n;
    return p;
  }
  std::span<const std::uint8_t> bytes(std::size_t n) {
    need(n);
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  void expect_end() const {
    if (!at_end()) {
      throw FramingError(std::string(what_) + ": " + std::to_string(remaining()) +
                         " trailing bytes");
    }
  }

 private:
  void need(std::size_t n) const {
    if (remaining() < n) throw FramingError(std::string(what_) + " is truncated");
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
  const char* what_;
};

}  // namespace rfbkit
