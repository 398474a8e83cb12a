#pragma once

#include <stdexcept>
#include <string>

namespace ring3pc {

/// Caller violated an operation's precondition (width mismatch, bad argument).
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Unsupported parameter or malformed configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed circuit, model or image file.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A real value outside the fixed-point range.
class EncodingError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// A party requested a PRG stream for a seed it does not hold.
class CapabilityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Bug in the harness: phase violation, desynchronised message, deadlock.
class HarnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Protocol-level abort: a consistency check or verification failed.
class AbortError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ring3pc
