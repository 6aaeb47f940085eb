#pragma once

#include <stdexcept>
#include <string>

namespace qdlab {

/// A state or matrix failed a numerical sanity check (hermiticity, trace,
/// positivity). Maps to CLI exit code 3.
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad configuration input (unknown key, out-of-range value). Exit code 2.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// File read/write failure, reported with path context. Exit code 4.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qdlab
