#pragma once

#include <stdexcept>
#include <string>

namespace semnet {

/// Base class for every failure caused by input data (bad files, invalid
/// lexicons, failed invariants). Programming errors use std::logic_error.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

/// A keyword claimed by two clusters, or a cluster label clashing with a word.
class CollisionError : public Error {
public:
    CollisionError(const std::string& token, const std::string& message)
        : Error(message), token_(token) {}
    const std::string& token() const noexcept { return token_; }

private:
    std::string token_;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

class VersionConflict : public Error {
public:
    using Error::Error;
};

}  // namespace semnet
