#ifndef HANKEL_TYPES_HPP
#define HANKEL_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace hankel
{

using Index          = Eigen::Index;
using Complex        = std::complex<double>;
using ComplexVector  = Eigen::VectorXcd;
using ComplexMatrix  = Eigen::MatrixXcd;
using RealVector     = Eigen::VectorXd;

/// Raised for dimension mismatches and out-of-range parameters.
class ArgumentError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a factorization or root-find cannot deliver the requested
/// accuracy. `residual()` carries the offending quantity when one exists.
class NumericalError : public std::runtime_error
{
public:
    explicit NumericalError(const std::string& what, double residual = 0.0)
        : std::runtime_error(what), residual_(residual)
    {
    }

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Length 2N-1 of the signal whose N x N Hankel matrix is being formed.
constexpr Index ambient_length(Index n) noexcept { return 2 * n - 1; }

} // namespace hankel

#endif // HANKEL_TYPES_HPP
