#pragma once

#include <stdexcept>
#include <string>

namespace polyorb {

/// Radius through a vertex is parallel to the curve tangent; the geometric
/// construction (or the tangent-line force measure) degenerates there.
class TangencyError : public std::runtime_error {
public:
    explicit TangencyError(const std::string& what) : std::runtime_error(what) {}
};

/// A trajectory step passed within the collision radius of the force center.
class SingularityError : public std::runtime_error {
public:
    SingularityError(const std::string& what, std::size_t step)
        : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// Root finding or another numeric routine failed to converge.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace polyorb
