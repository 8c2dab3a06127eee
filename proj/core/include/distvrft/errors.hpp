#pragma once

#include <stdexcept>
#include <string>

namespace distvrft {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DivisionByZeroError : public Error {
public:
    using Error::Error;
};

// Raised when a causal operation receives a transfer function with negative relative degree.
class ImproperTransferError : public Error {
public:
    using Error::Error;
};

class PoleOnGridError : public Error {
public:
    using Error::Error;
};

// Static feedthrough loop of an interconnection cannot be solved.
class IllPosedLoopError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class NotRepresentableError : public Error {
public:
    using Error::Error;
};

class ExcitationError : public Error {
public:
    using Error::Error;
};

class SpecError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace distvrft
