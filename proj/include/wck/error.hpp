#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wck {

enum class ErrorKind {
  Parse,
  Kernel,
  Domain,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  enum class Code { Syntax, UnknownIdentifier, BadExponent, WrongMode };

  ParseError(Code code, std::size_t offset, const std::string& msg)
      : Error(ErrorKind::Parse, msg + " at offset " + std::to_string(offset)),
        code_(code),
        offset_(offset) {}
  Code code() const { return code_; }
  std::size_t offset() const { return offset_; }

 private:
  Code code_;
  std::size_t offset_;
};

class KernelError : public Error {
 public:
  explicit KernelError(const std::string& msg) : Error(ErrorKind::Kernel, msg) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& msg) : Error(ErrorKind::Domain, msg) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(ErrorKind::Io, msg) {}
};

}  // namespace wck
