#pragma once

#include <stdexcept>
#include <string>

namespace mfmp {

// Base class for all model errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// --- column specification errors ---
class BadAlphas : public Error {
public:
    using Error::Error;
};
class MassBalanceViolation : public Error {
public:
    using Error::Error;
};
class SignPatternViolation : public Error {
public:
    using Error::Error;
};
class BadStream : public Error {
public:
    using Error::Error;
};

// --- numeric / root-finding errors ---
class ZeroVapor : public Error {
public:
    using Error::Error;
};
class EmptyStream : public Error {
public:
    using Error::Error;
};
class NonpositiveV : public Error {
public:
    using Error::Error;
};
class BracketFailure : public Error {
public:
    using Error::Error;
};

// --- balance propagation errors ---
class NonpositiveSectionVapor : public Error {
public:
    using Error::Error;
};
class NonpositiveReflux : public Error {
public:
    using Error::Error;
};

// --- feasibility / algorithm errors ---
class PinchOrderViolation : public Error {
public:
    using Error::Error;
};
class MissingRho : public Error {
public:
    using Error::Error;
};
class NoFeasibleCandidate : public Error {
public:
    using Error::Error;
};
class NoActiveRoot : public Error {
public:
    using Error::Error;
};
class ProductMismatch : public Error {
public:
    using Error::Error;
};

// --- simulator errors ---
class NegativeComposition : public Error {
public:
    using Error::Error;
};
class NotConverged : public Error {
public:
    using Error::Error;
};
class DegenerateSection : public Error {
public:
    using Error::Error;
};
class NotTernary : public Error {
public:
    using Error::Error;
};

}  // namespace mfmp
