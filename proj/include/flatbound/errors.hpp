#pragma once

#include <stdexcept>
#include <string>

namespace flatbound {

// Malformed or inconsistent input (bad labels, dimension mismatch, parse
// failures). Maps to CLI exit code 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A documented precondition of an operation does not hold (point outside a
// region, unbounded region where a bounded one is required). Exit code 3.
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An internal invariant failed; indicates a bug or an input outside the
// supported model class (e.g. a surrogate that is not minimizable). Exit code 4.
class InvariantError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace flatbound
