#pragma once

#include <stdexcept>
#include <string>

namespace cwave {

enum class ErrorKind {
  Validation,   // bad input, bad config, bad model
  Instability,  // non-finite or runaway wavefield
  Io,           // file format and filesystem problems
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(const std::string& what) {
  throw Error(ErrorKind::Validation, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(what);
}

}  // namespace cwave
