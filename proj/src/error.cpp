#include "boundkde/error.hpp"

namespace boundkde {

const char*
error_tag(ErrorKind kind)
{
  switch (kind) {
    case ErrorKind::invalid_argument:
      return "InvalidArgument";
    case ErrorKind::order_too_large:
      return "OrderTooLarge";
    case ErrorKind::dimension_mismatch:
      return "DimensionMismatch";
    case ErrorKind::empty_family:
      return "EmptyFamily";
    case ErrorKind::index_not_in_family:
      return "IndexNotInFamily";
    case ErrorKind::grid_mismatch:
      return "GridMismatch";
    case ErrorKind::invalid_amplitude:
      return "InvalidAmplitude";
    case ErrorKind::bad_envelope:
      return "BadEnvelope";
    case ErrorKind::insufficient_points:
      return "InsufficientPoints";
    case ErrorKind::file_not_found:
      return "FileNotFound";
    case ErrorKind::parse_error:
      return "ParseError";
    case ErrorKind::out_of_domain:
      return "OutOfDomain";
  }
  return "Unknown";
}

} // namespace boundkde
