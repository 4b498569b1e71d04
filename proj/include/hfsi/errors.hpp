#pragma once

#include <stdexcept>
#include <string>

namespace hfsi {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ArityMismatch : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// A Laurent polynomial was evaluated where one of its negative-exponent
/// coordinates vanishes.
class PoleAtPoint : public Error {
public:
    using Error::Error;
};

/// Malformed input: bad rational literal, non-symmetric metric, bad JSON shape.
class FormatError : public Error {
public:
    using Error::Error;
};

class EmptyWindow : public Error {
public:
    using Error::Error;
};

class SplitMismatch : public Error {
public:
    using Error::Error;
};

/// The 1-form handed to the companion integrator is not closed.
class NotClosed : public Error {
public:
    using Error::Error;
};

/// An antiderivative would need log(x_i); not representable as a Laurent polynomial.
class LogObstruction : public Error {
public:
    using Error::Error;
};

class UnknownName : public Error {
public:
    using Error::Error;
};

/// A candidate integral failed to Poisson-commute with the Hamiltonian.
class BracketNonzero : public Error {
public:
    using Error::Error;
};

}  // namespace hfsi
