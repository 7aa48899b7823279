#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dnlp {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DecodeError : public Error {
 public:
  explicit DecodeError(std::size_t offset)
      : Error("invalid UTF-8 at byte offset " + std::to_string(offset)),
        offset_(offset) {}

  DecodeError(const std::string& where, std::size_t offset)
      : Error(where + ": invalid UTF-8 at byte offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class StorageError : public IoError {
 public:
  using IoError::IoError;
};

class AlreadyExistsError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

class BlockUnavailableError : public Error {
 public:
  explicit BlockUnavailableError(const std::string& block)
      : Error("block unavailable: " + block + " (no surviving replica)"), block_(block) {}

  const std::string& block() const noexcept { return block_; }

 private:
  std::string block_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class JobFailure : public Error {
 public:
  using Error::Error;
};

class DeterminismError : public Error {
 public:
  using Error::Error;
};

}  // namespace dnlp
