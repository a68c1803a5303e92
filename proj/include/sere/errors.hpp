#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sere {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Blank user input where a nonempty value is required.
class EmptyInputError : public Error {
 public:
  using Error::Error;
};

// Hit counts outside the domain of the distance formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

class UnknownFieldError : public Error {
 public:
  explicit UnknownFieldError(std::string field)
      : Error("unknown field '" + field + "'"), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class UnsupportedLanguageError : public Error {
 public:
  explicit UnsupportedLanguageError(const std::string& code)
      : Error("language '" + code + "' is not served by this backend"), code_(code) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

enum class CorpusErrorKind { io, parse, missing_field, duplicate_title };

class CorpusError : public Error {
 public:
  CorpusError(CorpusErrorKind kind, std::size_t line, const std::string& message)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        kind_(kind),
        line_(line) {}
  CorpusErrorKind kind() const noexcept { return kind_; }
  // 1-based; 0 when the error is not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  CorpusErrorKind kind_;
  std::size_t line_;
};

enum class ProviderErrorKind { network, http_status, malformed_response, rate_limit, unsupported };

const char* to_string(ProviderErrorKind kind) noexcept;

class ProviderError : public Error {
 public:
  ProviderError(ProviderErrorKind kind, std::string endpoint, const std::string& message,
                bool retriable, int status = 0)
      : Error(std::string(to_string(kind)) + " error at " + endpoint + ": " + message),
        kind_(kind),
        endpoint_(std::move(endpoint)),
        detail_(message),
        retriable_(retriable),
        status_(status) {}

  ProviderErrorKind kind() const noexcept { return kind_; }
  const std::string& endpoint() const noexcept { return endpoint_; }
  // Message without the kind/endpoint prefix.
  const std::string& detail() const noexcept { return detail_; }
  bool retriable() const noexcept { return retriable_; }
  int status() const noexcept { return status_; }

 private:
  ProviderErrorKind kind_;
  std::string endpoint_;
  std::string detail_;
  bool retriable_;
  int status_;
};

class NoMatchError : public Error {
 public:
  explicit NoMatchError(std::string term)
      : Error("no article matches '" + term + "'"), term_(std::move(term)) {}
  const std::string& term() const noexcept { return term_; }

 private:
  std::string term_;
};

// Every harvest source failed for a subject.
class HarvestError : public Error {
 public:
  using Error::Error;
};

}  // namespace sere
