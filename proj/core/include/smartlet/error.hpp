#pragma once

#include <stdexcept>
#include <string>

namespace smartlet {

// Root of every error the core library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct MalformedProgram : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

struct ProtocolViolation : Error {
    using Error::Error;
};

struct TraceIoError : Error {
    using Error::Error;
};

}  // namespace smartlet
