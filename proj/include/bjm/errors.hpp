#pragma once

#include <stdexcept>
#include <string>

namespace bjm {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotHermitianError : public Error {
public:
    using Error::Error;
};

class SingularError : public Error {
public:
    SingularError(const std::string& what, double condition)
        : Error(what), condition_(condition) {}
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

/// Iterated logarithm (or similar) evaluated outside its domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A documented precondition of an operation was not met by the caller.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// The assumptions of an asymptotic statement fail numerically.
class HypothesisViolated : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& path, const std::string& message)
        : Error(path + ": " + message), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// The family violates the standing assumptions on the analysed range.
class ValidationError : public Error {
public:
    using Error::Error;
};

class IOError : public Error {
public:
    using Error::Error;
};

}  // namespace bjm
