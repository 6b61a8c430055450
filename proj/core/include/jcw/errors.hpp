#pragma once

#include <stdexcept>
#include <string>

namespace jcw {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameterError : public Error {
public:
    using Error::Error;
};

// Requested basis too small for the asked-for tail tolerance.
class TruncationError : public Error {
public:
    TruncationError(const std::string& msg, int required_nmax)
        : Error(msg), required_nmax(required_nmax) {}
    int required_nmax;
};

// Evolution leaked probability past the cutoff.
class TruncationLeakError : public Error {
public:
    TruncationLeakError(const std::string& msg, double drift)
        : Error(msg), trace_drift(drift) {}
    double trace_drift;
};

class NumericalOverflowError : public Error {
public:
    using Error::Error;
};

// Oracle refuses to run without enough Fock-space headroom.
class HeadroomError : public Error {
public:
    HeadroomError(const std::string& msg, int required_nmax)
        : Error(msg), required_nmax(required_nmax) {}
    int required_nmax;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

}  // namespace jcw
