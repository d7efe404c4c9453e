#pragma once

#include <stdexcept>
#include <string>

namespace chiralkerr {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad argument to a pure function (negative length, empty grid, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// A config value or typed parameter violates its invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Config file does not parse.
class ParseError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

class DegenerateSteadyState : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Gain where the medium must be passive.
class PhysicsViolation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace chiralkerr

#include <exception>

namespace chiralkerr {

// Rethrows the pending exception as the same chiralkerr type with `context` prepended.
[[noreturn]] inline void rethrow_with_context(std::exception_ptr ep, const std::string& context) {
    try {
        std::rethrow_exception(ep);
    } catch (const DegenerateSteadyState& e) {
        throw DegenerateSteadyState(context + e.what());
    } catch (const PhysicsViolation& e) {
        throw PhysicsViolation(context + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError(context + e.what());
    } catch (const DomainError& e) {
        throw DomainError(context + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(context + e.what());
    } catch (const ParseError& e) {
        throw ParseError(context + e.what());
    } catch (const IoError& e) {
        throw IoError(context + e.what());
    } catch (const std::exception& e) {
        throw Error(context + e.what());
    }
}

}  // namespace chiralkerr
