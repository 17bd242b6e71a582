#pragma once

#include <stdexcept>
#include <string>

namespace wmbo {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Adaptive quadrature gave up; carries the best error estimate reached.
class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

class RangeError : public Error {
public:
    using Error::Error;
};

// Marching squares produced a chain that does not close.
class TopologyError : public Error {
public:
    using Error::Error;
};

// Parameters outside the window where an experiment is meaningful.
class RegimeError : public Error {
public:
    using Error::Error;
};

class SymmetryError : public Error {
public:
    using Error::Error;
};

class UsageError : public Error {
public:
    using Error::Error;
};

}  // namespace wmbo
