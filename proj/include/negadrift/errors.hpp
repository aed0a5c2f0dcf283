#pragma once

#include <stdexcept>
#include <string>

namespace negadrift {

/// A theorem's hypothesis does not hold for the supplied inputs.
/// Malformed arguments (length mismatch, negative fitness, ...) use std::invalid_argument.
class PreconditionError : public std::domain_error {
public:
    explicit PreconditionError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace negadrift
