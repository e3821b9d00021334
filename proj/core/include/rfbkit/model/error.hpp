#pragma once

#include <stdexcept>
#include <string>

namespace rfbkit {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value does not fit the range allowed by its format.
class RangeError : public Error {
 public:
  using Error::Error;
};

// A rectangle or coordinate lies outside the framebuffer it refers to.
class BoundsError : public Error {
 public:
  using Error::Error;
};

// A byte sequence has the wrong length or is cut short.
class FramingError : public Error {
 public:
  using Error::Error;
};

// A peer sent something the protocol does not allow.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// The underlying connection failed or was closed.
class TransportError : public Error {
 public:
  using Error::Error;
};

class HandshakeError : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

class DecompressionError : public Error {
 public:
  using Error::Error;
};

// Two framebuffers that must agree in size or format do not.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// An invalid pixel format or link configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace rfbkit
