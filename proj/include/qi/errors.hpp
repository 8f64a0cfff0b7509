#pragma once

#include <stdexcept>
#include <string>

namespace qi {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A mode dimension is out of range or two operands disagree on dimensions.
struct dimension_error : error {
    using error::error;
};

// A mode label is duplicated or missing.
struct label_error : error {
    using error::error;
};

// A truncated representation cannot hold the requested state within the
// tail tolerance.
struct truncation_error : error {
    using error::error;
};

struct domain_error : error {
    using error::error;
};

// An infinite series hit its iteration cap before converging.
struct convergence_error : error {
    using error::error;
};

// A measurement with zero spread (or an otherwise singular denominator).
struct degenerate_error : error {
    using error::error;
};

// The state derivative has support where the reference state has none.
struct support_error : error {
    using error::error;
};

struct basis_error : error {
    using error::error;
};

// An error-probability bound ordering came out inverted.
struct hierarchy_error : error {
    using error::error;
};

} // namespace qi
