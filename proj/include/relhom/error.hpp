#pragma once

#include <stdexcept>
#include <string>

namespace relhom {

// Base class for all engine errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct RingMismatchError : Error {
    explicit RingMismatchError(const std::string& msg) : Error("ring mismatch: " + msg) {}
};

struct ShapeError : Error {
    explicit ShapeError(const std::string& msg) : Error("shape mismatch: " + msg) {}
};

// Thrown when a construction exceeds the configured generator/search caps,
// or when exact integer arithmetic would leave the representable range.
struct ResourceError : Error {
    explicit ResourceError(const std::string& msg) : Error("resource cap exceeded: " + msg) {}
};

// Thrown when a predicate on complexes is asked about degrees outside the
// window it can answer for.  Never silently extrapolated over.
struct WindowError : Error {
    explicit WindowError(const std::string& msg) : Error("window too small: " + msg) {}
};

struct PreconditionError : Error {
    explicit PreconditionError(const std::string& msg) : Error("precondition violated: " + msg) {}
};

// Internal signal: int64 fast path overflowed, retry with big integers.
struct OverflowSignal {};

} // namespace relhom
