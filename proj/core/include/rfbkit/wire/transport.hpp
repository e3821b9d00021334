#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rfbkit::wire {

// Reliable, ordered byte stream. Reads and writes may run on different
// threads; callers serialize writers themselves.
class Connection {
 public:
  virtual ~Connection() = default;

  // Blocks until buf is full. TransportError if the stream ends first.
  virtual void read_exact(std::span<std::uint8_t> buf) = 0;
  virtual void write_all(std::span<const std::uint8_t> bytes) = 0;
  // Idempotent. Unblocks pending reads on both ends.
  virtual void close() = 0;
  virtual std::string peer() const { return "?"; }
};

// Two connected in-memory endpoints.
std::pair<std::unique_ptr<Connection>, std::unique_ptr<Connection>> make_pipe();

// Serves reads from a fixed byte string and records writes. Reading past
// the end raises TransportError.
class BufferConnection final : public Connection {
 public:
  explicit BufferConnection(std::vector<std::uint8_t> input) : input_(std::move(input)) {}

  void read_exact(std::span<std::uint8_t> buf) override;
  void write_all(std::span<const std::uint8_t> bytes) override;
  void close() override { closed_ = true; }
  std::string peer() const override { return "buffer"; }

  std::size_t consumed() const { return pos_; }
  const std::vector<std::uint8_t>& written() const { return output_; }

 private:
  std::vector<std::uint8_t> input_;
  std::size_t pos_ = 0;
  std::vector<std::uint8_t> output_;
  bool closed_ = false;
};

// Wraps a connection and keeps a copy of every byte read through it.
class RecordingConnection final : public Connection {
 public:
  explicit RecordingConnection(Connection& inner) : inner_(inner) {}
  void read_exact(std::span<std::uint8_t> buf) override;
  void write_all(std::span<const std::uint8_t> bytes) override;
  void close() override { inner_.close(); }
  std::string peer() const override { return inner_.peer(); }

  std::vector<std::uint8_t> take_read();

 private:
  Connection& inner_;
  std::vector<std::uint8_t> read_;
};

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;
};

// Parses "host:port" (":port" and "port" mean all interfaces).
Endpoint parse_endpoint(const std::string& text);

std::unique_ptr<Connection> connect_tcp(const Endpoint& endpoint);

class TcpListener {
 public:
  explicit TcpListener(const Endpoint& endpoint);
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  // Blocks for the next client; nullptr once closed.
  std::unique_ptr<Connection> accept();
  std::uint16_t port() const { return port_; }
  void close();

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

}  // namespace rfbkit::wire
