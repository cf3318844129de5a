#pragma once

#include <stdexcept>
#include <string>

namespace navsim {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A scenario or metadata document violates its schema. key() names the offending entry.
class ConfigError : public Error {
  public:
    ConfigError(std::string key, const std::string& what)
        : Error(key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

  private:
    std::string key_;
};

/// Well-formed input that breaks a semantic invariant.
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// A query outside the domain of the model (e.g. a pose outside the map).
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Caller broke a precondition.
class ContractError : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    IoError(std::string path, const std::string& what)
        : Error(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

  private:
    std::string path_;
};

/// Malformed text input; line() is 1-based, 0 when not applicable.
class ParseError : public Error {
  public:
    ParseError(std::size_t line, const std::string& what)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

}  // namespace navsim
