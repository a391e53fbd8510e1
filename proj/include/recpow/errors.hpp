#pragma once

#include <stdexcept>
#include <string>

namespace recpow {

// Invalid or ill-formed run configuration. CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// The recurrence violates a non-degeneracy condition. CLI exit code 3.
class DegeneracyError : public std::runtime_error {
public:
    explicit DegeneracyError(const std::string& what) : std::runtime_error(what) {}
};

// Baker-Davenport reduction could not certify a positive epsilon within the
// configured attempt and precision limits. CLI exit code 4.
class ReductionError : public std::runtime_error {
public:
    explicit ReductionError(const std::string& what) : std::runtime_error(what) {}
};

// A guard against desk-scale blowup fired (search too large, precision cap
// reached, ...). CLI exit code 5.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// Internal: a certified operation could not be completed at the current
// working precision. Callers running a precision ladder catch this and retry
// with more bits; if it escapes to the top it becomes a ResourceError.
class PrecisionError : public std::runtime_error {
public:
    explicit PrecisionError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace recpow
