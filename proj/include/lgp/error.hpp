#pragma once

#include <stdexcept>
#include <string>

namespace lgp {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A solver precondition does not hold for the supplied data. `clause` names
/// the violated requirement so callers can report it verbatim.
class ValidationError : public Error {
 public:
  ValidationError(std::string clause, const std::string& detail)
      : Error(clause + ": " + detail), clause_(std::move(clause)) {}
  const std::string& clause() const noexcept { return clause_; }

 private:
  std::string clause_;
};

}  // namespace lgp
