#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace kycvar {

enum class ErrorKind {
  schema,            // malformed structure: wrong shape, missing column, asymmetric rho
  model_validation,  // structurally fine but mathematically invalid (non-PSD rho)
  domain,            // argument outside the operation's domain
  numerical,         // computation produced an impossible intermediate
  parse,             // unparseable token or row
  io,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base error for the engine. Carries an optional field name and row number so
/// that CLI and HTTP layers can report `{error, field?, row?}`.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string field = {},
        std::optional<std::size_t> row = std::nullopt)
      : std::runtime_error(message), kind_(kind), field_(std::move(field)), row_(row) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& field() const noexcept { return field_; }
  std::optional<std::size_t> row() const noexcept { return row_; }

 private:
  ErrorKind kind_;
  std::string field_;
  std::optional<std::size_t> row_;
};

class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& message, std::string field = {},
                       std::optional<std::size_t> row = std::nullopt)
      : Error(ErrorKind::schema, message, std::move(field), row) {}
};

class ModelValidationError : public Error {
 public:
  ModelValidationError(const std::string& message, double eigenvalue)
      : Error(ErrorKind::model_validation, message, "rho"), eigenvalue_(eigenvalue) {}
  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message, std::string field = {})
      : Error(ErrorKind::domain, message, std::move(field)) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& message) : Error(ErrorKind::numerical, message) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message, std::string field = {},
                      std::optional<std::size_t> row = std::nullopt)
      : Error(ErrorKind::parse, message, std::move(field), row) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error(ErrorKind::io, message) {}
};

}  // namespace kycvar
