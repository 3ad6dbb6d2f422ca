#pragma once

#include <stdexcept>
#include <string>

namespace dwl {

/// Cholesky factorization hit a nonpositive pivot; the matrix is not SPD.
class NotSpdError : public std::runtime_error {
public:
    NotSpdError(int pivot_index, double pivot_value)
        : std::runtime_error("matrix is not positive definite: pivot " +
                             std::to_string(pivot_index) + " = " + std::to_string(pivot_value)),
          pivot_index_(pivot_index), pivot_value_(pivot_value) {}

    int pivot_index() const noexcept { return pivot_index_; }
    double pivot_value() const noexcept { return pivot_value_; }

private:
    int pivot_index_;
    double pivot_value_;
};

/// Requested operation is not implemented for this dimension.
class UnsupportedDimensionError : public std::invalid_argument {
public:
    explicit UnsupportedDimensionError(const std::string& what)
        : std::invalid_argument(what) {}
};

/// Sample cannot support the requested estimate (too few rows, singular covariance).
class DegenerateSampleError : public std::runtime_error {
public:
    explicit DegenerateSampleError(const std::string& what)
        : std::runtime_error(what) {}
};

} // namespace dwl
