#pragma once

#include <stdexcept>
#include <string>

namespace stegomail {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid channel spec, key, repetition factor, trial count, ...
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A received mail or document sequence does not fit the protocol.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Received length does not split into whole code blocks / tuples / records.
class FramingError : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

// Mailboxes cannot be merged into an unambiguous sending order.
class OrderingError : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

// Synchronized counter overflowed its width.
class CounterError : public Error {
 public:
  using Error::Error;
};

}  // namespace stegomail
