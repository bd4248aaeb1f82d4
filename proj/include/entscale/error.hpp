#pragma once

#include <stdexcept>
#include <string>

namespace entscale {

/// Base of every domain error raised by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Exact min-cut asked for a graph larger than the enumeration budget.
class BudgetExceededError : public Error {
public:
    using Error::Error;
};

/// A cut with no crossing edges supports no ebits.
class DegenerateCutError : public Error {
public:
    using Error::Error;
};

class BelowRangeError : public Error {
public:
    using Error::Error;
};

class AboveRangeError : public Error {
public:
    using Error::Error;
};

/// Rank-deficient design matrix in a fit.
class DegenerateDataError : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ResourceError : public Error {
public:
    using Error::Error;
};

class UnsupportedTopologyError : public Error {
public:
    using Error::Error;
};

} // namespace entscale
