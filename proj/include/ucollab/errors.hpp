#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ucollab {

enum class ErrorKind {
  InvalidArgument,
  NotSymmetric,
  RankDeficient,
  NotDiagonal,
  ZeroSignalClass,
  AllRowsDead,
  Unachievable,
  Config,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorKind::InvalidArgument, message);
}

}  // namespace ucollab
