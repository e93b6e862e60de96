#pragma once

#include <stdexcept>
#include <string>

namespace bogent {

// Precondition and validation failures raise std::invalid_argument.
// Failures of an iterative or numerical procedure raise NumericalError.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bogent
