#include "blockwright/common/result.hpp"

namespace blockwright {

const char *errc_name(Errc code) {
  switch (code) {
  case Errc::OutOfBounds: return "OutOfBounds";
  case Errc::Occupied: return "Occupied";
  case Errc::Unsupported: return "Unsupported";
  case Errc::Empty: return "Empty";
  case Errc::WouldFloat: return "WouldFloat";
  case Errc::Unparseable: return "Unparseable";
  case Errc::MissingField: return "MissingField";
  case Errc::UnknownLabel: return "UnknownLabel";
  case Errc::AmbiguousAnchor: return "AmbiguousAnchor";
  case Errc::UnknownShape: return "UnknownShape";
  case Errc::UnusableAnswer: return "UnusableAnswer";
  case Errc::IncompleteSpec: return "IncompleteSpec";
  case Errc::SlotMismatch: return "SlotMismatch";
  case Errc::MissingBinding: return "MissingBinding";
  case Errc::InvalidArgument: return "InvalidArgument";
  case Errc::InvalidOverride: return "InvalidOverride";
  case Errc::Timeout: return "Timeout";
  case Errc::TransportError: return "TransportError";
  case Errc::ProviderError: return "ProviderError";
  case Errc::MalformedOutput: return "MalformedOutput";
  case Errc::FixtureMissing: return "FixtureMissing";
  case Errc::SessionBusy: return "SessionBusy";
  case Errc::SessionNotFound: return "SessionNotFound";
  case Errc::BadConfig: return "BadConfig";
  case Errc::CorruptLog: return "CorruptLog";
  case Errc::Io: return "Io";
  }
  return "Unknown";
}

std::string Error::to_string() const {
  std::string out = errc_name(code);
  if (!message.empty()) {
    out += ": ";
    out += message;
  }
  return out;
}

} // namespace blockwright
