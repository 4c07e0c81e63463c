/**
 * @file errors.hpp
 * @brief Exception hierarchy shared by every qdiscount module.
 */

#ifndef QDISCOUNT_ERRORS_HPP
#define QDISCOUNT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qdiscount {

/// Base of all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of a function.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The discount denominator exp_q(...) collapsed (q < 0 past its cutoff).
class Divergence : public Error {
public:
    Divergence(const std::string& what, double t) : Error(what), t_(t) {}
    double time() const noexcept { return t_; }

private:
    double t_;
};

class Unsupported : public Error {
public:
    using Error::Error;
};

/// Runge-Kutta state became non-finite or the value left (0, inf).
class StepFailure : public Error {
public:
    StepFailure(const std::string& what, double t) : Error(what), t_(t) {}
    double time() const noexcept { return t_; }

private:
    double t_;
};

/// Present-value difference keeps one sign over the whole decision window.
class NoCrossing : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

class NonConvergence : public Error {
public:
    using Error::Error;
};

/// Malformed input file (spec JSON, dataset CSV).
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace qdiscount

#endif  // QDISCOUNT_ERRORS_HPP
