#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rfbkit/model/pixel_format.hpp"
#include "rfbkit/wire/transport.hpp"

namespace rfbkit::wire {

// Big-endian reads from a connection, optionally keeping the consumed bytes.
class StreamReader {
 public:
  explicit StreamReader(Connection& conn, std::vector<std::uint8_t>* capture = nullptr)
      : conn_(conn), capture_(capture) {}

  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::int32_t s32() { return static_cast<std::int32_t>(u32()); }
  void read(std::span<std::uint8_t> buf);
  std::vector<std::uint8_t> bytes(std::size_t n);
  void skip(std::size_t n);
  // Appends n bytes to out.
  void append(std::vector<std::uint8_t>& out, std::size_t n);

 private:
  Connection& conn_;
  std::vector<std::uint8_t>* capture_;
};

}  // namespace rfbkit::wire
