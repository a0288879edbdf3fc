#pragma once

#include <stdexcept>
#include <string>

namespace satloss {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// --- device model ---

/// No finite temperature compensation point exists (vth_tempco or
/// mobility_exp is zero).
class DegenerateTcpError : public Error {
public:
    using Error::Error;
};

/// Gate voltage at or below threshold while a positive current was requested.
class BelowThresholdError : public Error {
public:
    using Error::Error;
};

/// Requested current cannot be reached within the compliance voltage.
class ComplianceExceededError : public Error {
public:
    using Error::Error;
};

// --- thermal network ---

class DimensionMismatchError : public Error {
public:
    using Error::Error;
};

class UnknownNodeError : public Error {
public:
    using Error::Error;
};

// --- electro-thermal simulation ---

/// Trace ended before any classification criterion was met.
class UnsettledError : public Error {
public:
    using Error::Error;
};

class NoConvergenceError : public Error {
public:
    using Error::Error;
};

/// Every point of a calibration sweep failed.
class SweepError : public Error {
public:
    using Error::Error;
};

// --- calibration fitting ---

class UnderdeterminedError : public Error {
public:
    using Error::Error;
};

class DegenerateSpreadError : public Error {
public:
    using Error::Error;
};

class NotAStepError : public Error {
public:
    using Error::Error;
};

class ZeroModelError : public Error {
public:
    using Error::Error;
};

// --- configuration and trace files ---

class ParseError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

class NonMonotonicTimeError : public Error {
public:
    using Error::Error;
};

}  // namespace satloss
