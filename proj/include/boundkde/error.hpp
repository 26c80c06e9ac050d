#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace boundkde {

enum class ErrorKind
{
  invalid_argument,
  order_too_large,
  dimension_mismatch,
  empty_family,
  index_not_in_family,
  grid_mismatch,
  invalid_amplitude,
  bad_envelope,
  insufficient_points,
  file_not_found,
  parse_error,
  out_of_domain
};

//! Short machine-readable tag for an error kind, e.g. "EmptyFamily".
const char* error_tag(ErrorKind kind);

//! Single exception type for the library; `kind()` distinguishes the cause.
class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(what)
    , kind_(kind)
  {}

  //! Error tied to a 1-based input location (0 = not applicable).
  Error(ErrorKind kind, const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error(what)
    , kind_(kind)
    , line_(line)
    , column_(column)
  {}

  ErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  ErrorKind kind_;
  std::size_t line_ = 0;
  std::size_t column_ = 0;
};

} // namespace boundkde
