#ifndef NASHFORGE_ERROR_HPP
#define NASHFORGE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace nashforge {

/// Malformed or inconsistent input: bad shapes, invalid circuits, bad files.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A condition that the reduction guarantees on every instance failed to hold
/// (e.g. an equilibrium with s = 0). Always an implementation bug upstream.
class LemmaViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Exhaustive work requested beyond the configured cap.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace nashforge

#endif
