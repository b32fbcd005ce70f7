#pragma once

#include <stdexcept>
#include <string>

namespace dsub {

enum class ErrorKind {
  Parse,
  DuplicateBinding,
  SelfReference,
  UnboundVariable,
  InternalLimit,
  ElaborationGap,
  UnknownMember,
  Io,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::DuplicateBinding: return "DuplicateBinding";
    case ErrorKind::SelfReference: return "SelfReference";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::InternalLimit: return "InternalLimit";
    case ErrorKind::ElaborationGap: return "ElaborationGap";
    case ErrorKind::UnknownMember: return "UnknownMember";
    case ErrorKind::Io: return "IoError";
  }
  return "Error";
}

/// Base error for contract violations. Negative *results* (stuck exposure,
/// untypable terms, failed subtype checks) are values, never exceptions.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : Error(ErrorKind::Parse, std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace dsub
