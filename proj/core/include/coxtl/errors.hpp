#ifndef COXTL_ERRORS_HPP
#define COXTL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace coxtl {

// A computation was asked to exceed a configured resource bound (group order,
// coefficient width).  Never raised silently: callers may retry with an
// explicit override where the API provides one.
class CapacityError : public std::runtime_error {
public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// A documented precondition of an operation was violated by the caller.
class ContractError : public std::logic_error {
public:
  explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

// An internal invariant failed; indicates a bug, not bad input.
class InternalError : public std::logic_error {
public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

// Malformed textual input (words, polynomials, cache files).
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace coxtl

#endif
