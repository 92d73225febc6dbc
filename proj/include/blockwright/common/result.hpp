#pragma once

#include <string>
#include <utility>
#include <variant>

namespace blockwright {

enum class Errc {
  OutOfBounds,
  Occupied,
  Unsupported,
  Empty,
  WouldFloat,
  Unparseable,
  MissingField,
  UnknownLabel,
  AmbiguousAnchor,
  UnknownShape,
  UnusableAnswer,
  IncompleteSpec,
  SlotMismatch,
  MissingBinding,
  InvalidArgument,
  InvalidOverride,
  Timeout,
  TransportError,
  ProviderError,
  MalformedOutput,
  FixtureMissing,
  SessionBusy,
  SessionNotFound,
  BadConfig,
  CorruptLog,
  Io,
};

const char *errc_name(Errc code);

struct Error {
  Errc code;
  std::string message;
  // ProviderError carries the HTTP status; CorruptLog the 1-based line.
  int detail = 0;

  std::string to_string() const;
};

inline Error make_error(Errc code, std::string message, int detail = 0) {
  return Error{code, std::move(message), detail};
}

template <typename T>
class [[nodiscard]] Result {
public:
  Result(T value) : data_(std::in_place_index<0>, std::move(value)) {}
  Result(Error error) : data_(std::in_place_index<1>, std::move(error)) {}

  bool ok() const { return data_.index() == 0; }
  explicit operator bool() const { return ok(); }

  const T &value() const & { return std::get<0>(data_); }
  T &value() & { return std::get<0>(data_); }
  T &&value() && { return std::get<0>(std::move(data_)); }

  const Error &error() const { return std::get<1>(data_); }

private:
  std::variant<T, Error> data_;
};

template <>
class [[nodiscard]] Result<void> {
public:
  Result() = default;
  Result(Error error) : error_(std::move(error)), ok_(false) {}

  bool ok() const { return ok_; }
  explicit operator bool() const { return ok_; }
  const Error &error() const { return error_; }

private:
  Error error_{Errc::Io, {}};
  bool ok_ = true;
};

using Status = Result<void>;

} // namespace blockwright
