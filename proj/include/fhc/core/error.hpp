#ifndef FHC_CORE_ERROR_HPP
#define FHC_CORE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace fhc {

// Error taxonomy mirrors the CLI exit-code contract:
// usage errors exit 1, DataError/IoError exit 2, NumericError exit 3.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shape or contract violation (dimension mismatch, invalid layer chain).
struct DimError : Error {
  using Error::Error;
};

// Non-finite values, failed convergence, degenerate linear systems.
struct NumericError : Error {
  using Error::Error;
};

// Malformed or unreadable input data.
struct DataError : Error {
  using Error::Error;
};

enum class IoErrorKind {
  bad_magic,
  version_mismatch,
  truncated,
  dim_chain,
  malformed,
};

struct IoError : DataError {
  IoErrorKind kind;
  IoError(IoErrorKind k, const std::string& msg) : DataError(msg), kind(k) {}
};

}  // namespace fhc

#endif
