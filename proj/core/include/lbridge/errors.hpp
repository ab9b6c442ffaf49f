#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lbridge/term.hpp"

namespace lbridge {

/// Base of every error raised by the library. `kind()` is a stable
/// snake_case name used when errors are rendered for users.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message) : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

/// Location in source text. Offsets are byte offsets, line and column are 1-based.
struct SourceSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, SourceSpan span);

  const SourceSpan& span() const noexcept { return span_; }
  /// Message without the location prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  SourceSpan span_;
  std::string detail_;
};

/// No resolution step could turn a term into an object, or an object into a term.
class ConversionError : public Error {
 public:
  ConversionError(const std::string& message, std::optional<Term> term = std::nullopt, std::string target = {},
                  std::vector<std::string> steps_tried = {});

  const std::optional<Term>& term() const noexcept { return term_; }
  const std::string& target() const noexcept { return target_; }
  const std::vector<std::string>& steps_tried() const noexcept { return steps_; }

 protected:
  ConversionError(std::string kind, const std::string& message, std::optional<Term> term);

 private:
  std::optional<Term> term_;
  std::string target_;
  std::vector<std::string> steps_;
};

/// The association for a term exists but was invalidated by a collection pass.
class DeadReferenceError : public ConversionError {
 public:
  DeadReferenceError(RefId id, const Term& term);

  RefId id() const noexcept { return id_; }

 private:
  RefId id_;
};

class NotAReferenceError : public Error {
 public:
  explicit NotAReferenceError(const std::string& message) : Error("not_a_reference", message) {}
};

class KeyConflictError : public Error {
 public:
  explicit KeyConflictError(const std::string& message) : Error("key_conflict", message) {}
};

class InvalidKeyError : public Error {
 public:
  explicit InvalidKeyError(const std::string& message) : Error("invalid_key", message) {}
};

class InvalidHeadError : public Error {
 public:
  explicit InvalidHeadError(const std::string& message) : Error("invalid_head", message) {}
};

class NoCodecError : public Error {
 public:
  explicit NoCodecError(const std::string& message) : Error("no_codec", message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error("io_error", message) {}
};

/// Resolution exceeded the configured depth bound.
class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& message) : Error("resource_error", message) {}
};

/// A goal was an unbound variable at call time.
class InstantiationError : public Error {
 public:
  explicit InstantiationError(const std::string& message) : Error("instantiation_error", message) {}
};

/// A goal was a number or a foreign reference.
class TypeError : public Error {
 public:
  explicit TypeError(const std::string& message) : Error("type_error", message) {}
};

}  // namespace lbridge
