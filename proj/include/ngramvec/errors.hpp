/**
 * ngramvec - word embeddings trained with n-gram augmented contexts
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace ngramvec {

// Exit-code classes used by the CLI: config/usage -> 1, data -> 2, numeric -> 3.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Raised by the vector-file loader; every malformed input maps to one kind.
class VectorFileError : public DataError {
 public:
  enum class Kind {
    kIo,
    kBadHeader,
    kCountMismatch,
    kDimensionMismatch,
    kDuplicateSurface,
    kNonFinite,
  };

  VectorFileError(Kind kind, const std::string& what)
      : DataError(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace ngramvec
