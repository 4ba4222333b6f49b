#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hazyard {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BoundsError : Error {
  using Error::Error;
};

struct UnknownContainerError : Error {
  using Error::Error;
};

struct DomainError : Error {
  using Error::Error;
};

struct InvariantError : Error {
  using Error::Error;
};

struct CapacityError : Error {
  using Error::Error;
};

// A forced relocation found no placeable cell.
struct ConfigurationFullError : Error {
  using Error::Error;
};

struct EnumerationBoundError : Error {
  using Error::Error;
};

struct VerificationError : Error {
  using Error::Error;
};

class MoveError : public Error {
 public:
  enum class Kind { buried_container, unsupported_destination, occupied_destination, same_cell };

  MoveError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace hazyard
