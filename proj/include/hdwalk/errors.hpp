#pragma once

#include <stdexcept>
#include <string>

namespace hdwalk {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mismatched dimensions, empty clouds, non-finite coordinates.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// Matrix has an eigenvalue below the PSD noise floor.
class NotPsdError : public Error {
public:
    using Error::Error;
};

/// Distribution or model parameter outside its admissible range.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Argument outside the domain of a function (e.g. time not in [0,1]).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Requested allocation exceeds the configured memory budget.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Caller violated a documented precondition (e.g. unsorted sample).
class ContractError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Invalid experiment configuration; the message names the violated constraint.
class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace hdwalk
