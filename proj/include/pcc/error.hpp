#pragma once

#include <stdexcept>
#include <string>

namespace pcc {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidEnvelope : public Error {
public:
    explicit InvalidEnvelope(const std::string& reason) : Error("invalid envelope: " + reason) {}
};

class InvalidSource : public Error {
public:
    explicit InvalidSource(const std::string& reason) : Error("invalid source: " + reason) {}
};

class DomainError : public Error {
public:
    using Error::Error;
};

class InvalidSymbol : public Error {
public:
    using Error::Error;
};

class LengthLimitExceeded : public Error {
public:
    using Error::Error;
};

class RankOutOfRange : public Error {
public:
    using Error::Error;
};

class PrecisionOverflow : public Error {
public:
    using Error::Error;
};

class CorruptStream : public Error {
public:
    explicit CorruptStream(const std::string& what) : Error("corrupt stream: " + what) {}
};

// A numerically checked inequality failed. Raised by the lemma checkers; it
// means the implementation is wrong, not the mathematics.
class LemmaViolation : public Error {
public:
    using Error::Error;
};

class BoundViolation : public Error {
public:
    using Error::Error;
};

class UnboundedSum : public Error {
public:
    using Error::Error;
};

}  // namespace pcc
