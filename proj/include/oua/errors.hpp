#ifndef OUA_ERRORS_HPP
#define OUA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace oua {

/// Caller passed incompatible or malformed arguments (mismatched algebras,
/// mismatched scalar tags, bad dimensions).
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

/// A requested construction does not exist in the supported family
/// (e.g. octonionic hermitian matrices with n != 3).
class UnsupportedConstruction : public std::runtime_error {
 public:
  explicit UnsupportedConstruction(const std::string& what)
      : std::runtime_error(what) {}
};

/// Input data failed a structural validation (unit not an identity,
/// trace form not positive definite, element not an event, ...).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what)
      : std::runtime_error(what) {}
};

/// A numerical procedure could not produce a trustworthy answer:
/// complex spectrum where a real one was required, degenerate random
/// draws beyond the retry budget, loss of closure in a null-space solve.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace oua

#endif  // OUA_ERRORS_HPP
