#include "ucollab/errors.hpp"

namespace ucollab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::NotDiagonal: return "NotDiagonal";
    case ErrorKind::ZeroSignalClass: return "ZeroSignalClass";
    case ErrorKind::AllRowsDead: return "AllRowsDead";
    case ErrorKind::Unachievable: return "Unachievable";
    case ErrorKind::Config: return "Config";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace ucollab
