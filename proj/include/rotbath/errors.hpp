#pragma once

#include <stdexcept>
#include <string>

namespace rotbath {

// Base of every error the library raises on a violated precondition or a
// quantity that is mathematically undefined for the given inputs.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

// beta(1 - m*Omega/omega) at omega = 0, m != 0.
class UndefinedLocalTemperature : public DomainError {
public:
    using DomainError::DomainError;
};

class PositivityViolation : public Error {
public:
    using Error::Error;
};

// Asked for the asymptotic population of a superradiant or marginal boson.
class NoStationaryPopulation : public DomainError {
public:
    using DomainError::DomainError;
};

// kappa = 0 with gamma_up >= gamma_down: the mean-field flow has no fixed point.
class NoFixedPoint : public DomainError {
public:
    using DomainError::DomainError;
};

class AlignmentError : public Error {
public:
    using Error::Error;
};

}  // namespace rotbath
