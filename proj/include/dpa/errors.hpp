#pragma once

#include <stdexcept>
#include <string>

namespace dpa {

/// A numerical procedure could not deliver a certified answer (root count
/// mismatch, contour stuck on a root, integrator overflow, undecidable
/// classification). The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dpa
