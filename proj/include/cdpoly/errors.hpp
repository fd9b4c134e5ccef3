#pragma once

#include <stdexcept>
#include <string>

namespace cdpoly {

/// Malformed input: bad coefficient lengths, bad JSON schema, bad trees.
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

/// Violated mathematical precondition: singular input, unsupported level,
/// non-orthogonal arguments, non-zero sample points.
class PreconditionError : public std::runtime_error {
public:
    explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

/// Negative-real input to a polar-form operation without a direction hint.
/// The imaginary direction is a whole sphere of equally valid choices.
class AmbiguousDirectionError : public PreconditionError {
public:
    explicit AmbiguousDirectionError(const std::string& what) : PreconditionError(what) {}
};

}  // namespace cdpoly
