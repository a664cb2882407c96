#pragma once
//
// kronsvd/errors.hpp: exception types shared across the library.
//

#include <stdexcept>
#include <string>

namespace kronsvd {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shape/size mismatches between operands.
struct DimensionError : Error {
    using Error::Error;
};

// Refusal to materialize something larger than the configured cap.
struct CapacityError : Error {
    using Error::Error;
};

// Malformed input files; message carries line/byte position.
struct ParseError : Error {
    using Error::Error;
};

// Zero singular values where an inverse is requested, solver breakdowns, etc.
struct NumericError : Error {
    using Error::Error;
};

} // namespace kronsvd
