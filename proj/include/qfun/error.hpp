#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qfun {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by evaluate() when a reachable variable has no value.
class UnassignedVariable : public Error {
public:
    using Error::Error;
};

/// Raised when an assignment applied to a game does not cover its first block.
class PartialBlock : public Error {
public:
    using Error::Error;
};

/// Time or memory budget exhausted; the solver reports UNKNOWN.
class ResourceLimit : public Error {
public:
    using Error::Error;
};

/// Brute-force oracle refused an instance above its variable cap.
class TooLarge : public Error {
public:
    using Error::Error;
};

class InvalidPrefix : public Error {
public:
    using Error::Error;
};

} // namespace qfun
