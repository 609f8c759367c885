#pragma once

#include <stdexcept>
#include <string>

namespace dsf {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed arguments: duplicates, out-of-range residues, shape mismatches.
class InvalidInput : public Error {
public:
    using Error::Error;
};

// Well-formed arguments that a construction does not support
// (composite modulus, wrong residue class, ...).
class UnsupportedParameters : public Error {
public:
    using Error::Error;
};

// An experiment or command references data that does not exist.
class ConfigurationError : public Error {
public:
    using Error::Error;
};

// Factorization failure or inconsistent linear system.
class SolverError : public Error {
public:
    using Error::Error;
};

class CatalogError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace dsf
