#ifndef CIREST_ERROR_HPP
#define CIREST_ERROR_HPP

#include <stdexcept>
#include <string>

namespace cirest {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Collinear (or numerically collinear) triangle vertices.
class DegenerateTriangle : public Error {
public:
    using Error::Error;
};

/// A quantity that is positive in exact arithmetic came out non-positive.
class NumericalInconsistency : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Denominator seminorm |v|_{k+1} vanished (v is in P_k).
class ZeroSeminorm : public Error {
public:
    using Error::Error;
};

class ConvergenceFailure : public Error {
public:
    ConvergenceFailure(const std::string& what, int iterations, double residual)
        : Error(what), iterations_(iterations), residual_(residual) {}

    int iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    int iterations_;
    double residual_;
};

} // namespace cirest

#endif // CIREST_ERROR_HPP
