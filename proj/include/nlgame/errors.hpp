#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nlgame {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition violated by the caller (bad spacing, point outside domain, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Config/schema problem. `path` is the JSON path of the offending field.
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// A time step produced a non-finite value.
class BlowupError : public Error {
 public:
  BlowupError(std::size_t node, double time, const std::string& what)
      : Error(what), node_(node), time_(time) {}
  std::size_t node() const noexcept { return node_; }
  double time() const noexcept { return time_; }

 private:
  std::size_t node_;
  double time_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace nlgame
