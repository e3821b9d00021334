#include "rfbkit/wire/transport.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <mutex>

#include "rfbkit/model/error.hpp"

namespace rfbkit::wire {
namespace {

// One direction of an in-memory pipe.
struct Channel {
  std::vector<std::uint8_t> data;
  std::size_t pos = 0;
  bool closed = false;
};

struct PipeState {
  std::mutex mu;
  std::condition_variable cv;
  Channel channels[2];
};

class PipeEnd final : public Connection {
 public:
  PipeEnd(std::shared_ptr<PipeState> state, int side) : state_(std::move(state)), side_(side) {}
  ~PipeEnd() override { close(); }

  void read_exact(std::span<std::uint8_t> buf) override {
    std::unique_lock lock(state_->mu);
    Channel& in = state_->channels[1 - side_];
    std::size_t got = 0;
    while (got < buf.size()) {
      state_->cv.wait(lock, [&] { return in.pos < in.data.size() || in.closed; });
      const std::size_t avail = in.data.size() - in.pos;
      if (avail == 0) throw TransportError("connection closed by peer");
      const std::size_t n = std::min(avail, buf.size() - got);
      std::copy_n(in.data.begin() + static_cast<std::ptrdiff_t>(in.pos), n, buf.begin() + got);
      in.pos += n;
      got += n;
      if (in.pos == in.data.size()) {
        in.data.clear();
        in.pos = 0;
      }
    }
  }

  void write_all(std::span<const std::uint8_t> bytes) override {
    {
      std::lock_guard lock(state_->mu);
      Channel& out = state_->channels[side_];
      if (out.closed) throw TransportError("write on closed connection");
      out.data.insert(out.data.end(), bytes.begin(), bytes.end());
    }
    state_->cv.notify_all();
  }

  void close() override {
    {
      std::lock_guard lock(state_->mu);
      state_->channels[0].closed = true;
      state_->channels[1].closed = true;
    }
    state_->cv.notify_all();
  }

  std::string peer() const override { return side_ == 0 ? "pipe:a" : "pipe:b"; }

 private:
  std::shared_ptr<PipeState> state_;
  int side_;
};

class TcpConnection final : public Connection {
 public:
  TcpConnection(int fd, std::string peer) : fd_(fd), peer_(std::move(peer)) {
    int one = 1;
    ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  }
  ~TcpConnection() override {
    close();
    ::close(fd_);
  }

  void read_exact(std::span<std::uint8_t> buf) override {
    std::size_t got = 0;
    while (got < buf.size()) {
      const ssize_t n = ::recv(fd_, buf.data() + got, buf.size() - got, 0);
      if (n == 0) throw TransportError("connection closed by " + peer_);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw TransportError("recv from " + peer_ + ": " + std::strerror(errno));
      }
      got += static_cast<std::size_t>(n);
    }
  }

  void write_all(std::span<const std::uint8_t> bytes) override {
    std::size_t sent = 0;
    while (sent < bytes.size()) {
      const ssize_t n = ::send(fd_, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw TransportError("send to " + peer_ + ": " + std::strerror(errno));
      }
      sent += static_cast<std::size_t>(n);
    }
  }

  void close() override { ::shutdown(fd_, SHUT_RDWR); }
  std::string peer() const override { return peer_; }

 private:
  int fd_;
  std::string peer_;
};

std::string describe(const sockaddr_storage& addr) {
  char host[NI_MAXHOST] = "?";
  char port[NI_MAXSERV] = "?";
  ::getnameinfo(reinterpret_cast<const sockaddr*>(&addr), sizeof addr, host, sizeof host, port,
                sizeof port, NI_NUMERICHOST | NI_NUMERICSERV);
  return std::string(host) + ":" + port;
}

}  // namespace

std::pair<std::unique_ptr<Connection>, std::unique_ptr<Connection>> make_pipe() {
  auto state = std::make_shared<PipeState>();
  return {std::make_unique<PipeEnd>(state, 0), std::make_unique<PipeEnd>(state, 1)};
}

void BufferConnection::read_exact(std::span<std::uint8_t> buf) {
  if (closed_ || input_.size() - pos_ < buf.size()) {
    pos_ = input_.size();
    throw TransportError("unexpected end of stream");
  }
  std::copy_n(input_.begin() + static_cast<std::ptrdiff_t>(pos_), buf.size(), buf.begin());
  pos_ += buf.size();
}

void BufferConnection::write_all(std::span<const std::uint8_t> bytes) {
  output_.insert(output_.end(), bytes.begin(), bytes.end());
}

void RecordingConnection::read_exact(std::span<std::uint8_t> buf) {
  inner_.read_exact(buf);
  read_.insert(read_.end(), buf.begin(), buf.end());
}

void RecordingConnection::write_all(std::span<const std::uint8_t> bytes) {
  inner_.write_all(bytes);
}

std::vector<std::uint8_t> RecordingConnection::take_read() { return std::exchange(read_, {}); }

Endpoint parse_endpoint(const std::string& text) {
  const auto colon = text.rfind(':');
  Endpoint ep;
  std::string port = text;
  if (colon != std::string::npos) {
    ep.host = text.substr(0, colon);
    port = text.substr(colon + 1);
  }
  if (ep.host.size() >= 2 && ep.host.front() == '[' && ep.host.back() == ']') {
    ep.host = ep.host.substr(1, ep.host.size() - 2);
  }
  try {
    std::size_t used = 0;
    const unsigned long v = std::stoul(port, &used);
    if (used != port.size() || v > 0xFFFF) throw std::out_of_range("port");
    ep.port = static_cast<std::uint16_t>(v);
  } catch (const std::logic_error&) {
    throw ConfigError("invalid endpoint '" + text + "', expected host:port");
  }
  return ep;
}

std::unique_ptr<Connection> connect_tcp(const Endpoint& endpoint) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string host = endpoint.host.empty() ? "127.0.0.1" : endpoint.host;
  const std::string port = std::to_string(endpoint.port);
  if (int rc = ::getaddrinfo(host.c_str(), port.c_str(), &hints, &res); rc != 0) {
    throw TransportError("resolve " + host + ": " + ::gai_strerror(rc));
  }
  std::string last_error = "no addresses";
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
      ::freeaddrinfo(res);
      return std::make_unique<TcpConnection>(fd, host + ":" + port);
    }
    last_error = std::strerror(errno);
    ::close(fd);
  }
  ::freeaddrinfo(res);
  throw TransportError("connect to " + host + ":" + port + ": " + last_error);
}

TcpListener::TcpListener(const Endpoint& endpoint) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const std::string port = std::to_string(endpoint.port);
  const char* host = endpoint.host.empty() ? nullptr : endpoint.host.c_str();
  if (int rc = ::getaddrinfo(host, port.c_str(), &hints, &res); rc != 0) {
    throw TransportError(std::string("resolve listen address: ") + ::gai_strerror(rc));
  }
  std::string last_error = "no addresses";
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 16) == 0) {
      fd_ = fd;
      break;
    }
    last_error = std::strerror(errno);
    ::close(fd);
  }
  ::freeaddrinfo(res);
  if (fd_ < 0) throw TransportError("listen on port " + port + ": " + last_error);

  sockaddr_storage addr{};
  socklen_t len = sizeof addr;
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = addr.ss_family == AF_INET6
              ? ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port)
              : ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
}

TcpListener::~TcpListener() {
  close();
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<Connection> TcpListener::accept() {
  for (;;) {
    sockaddr_storage addr{};
    socklen_t len = sizeof addr;
    const int fd = ::accept(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    if (fd >= 0) return std::make_unique<TcpConnection>(fd, describe(addr));
    if (errno == EINTR || errno == ECONNABORTED) continue;
    return nullptr;
  }
}

void TcpListener::close() {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

}  // namespace rfbkit::wire
