#pragma once

#include <stdexcept>
#include <string>

namespace fractal {

// Base class for all library errors. CLI maps SpecError/InvalidArgument to
// exit code 2 and everything else to exit code 1.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Validation failures (bad spec file, bad argument values).
struct SpecError : Error {
    using Error::Error;
};
struct InvalidArgument : Error {
    using Error::Error;
};

// Computation failures.
struct SingularMatrix : Error {
    using Error::Error;
};
struct SingularInterior : Error {
    using Error::Error;
};
struct NotProportional : Error {
    using Error::Error;
};
struct NoConvergence : Error {
    double achieved_residual = 0.0;
    NoConvergence(const std::string& msg, double achieved)
        : Error(msg), achieved_residual(achieved) {}
};
struct ZeroMeasureCell : Error {
    using Error::Error;
};
struct NotExactMode : Error {
    using Error::Error;
};
struct DegenerateAnchors : Error {
    using Error::Error;
};

// Internal consistency violation (broken invariant, not user error).
struct InternalError : Error {
    using Error::Error;
};

}  // namespace fractal
