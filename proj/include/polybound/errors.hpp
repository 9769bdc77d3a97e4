#pragma once

#include <stdexcept>
#include <string>

namespace polybound {

// Input file or JSON object does not match its schema.
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Distribution has no automatic central-moment-bound parameter and the caller
// supplied no manual override.
struct UnsupportedDistribution : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An enumeration or moment computation would exceed its size cap.
// Caps are hard errors, never silent truncation.
struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Constant fitting found no finite constant under the search cap.
struct FitDivergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace polybound
