#include <hankel/hankel_core.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/SVD>

namespace hankel
{

namespace
{

Index order_from_length(Index len)
{
    if (len < 1 || len % 2 == 0)
    {
        throw ArgumentError("signal length must be odd (2N-1), got " +
                            std::to_string(len));
    }
    return (len + 1) / 2;
}

void check_signal(const ComplexVector& x, Index n)
{
    if (n < 1)
    {
        throw ArgumentError("Hankel order N must be >= 1");
    }
    if (x.size() != ambient_length(n))
    {
        throw ArgumentError("expected signal of length " +
                            std::to_string(ambient_length(n)) + ", got " +
                            std::to_string(x.size()));
    }
}

RealVector singular_values(const ComplexMatrix& x)
{
    if (x.size() == 0)
    {
        return RealVector();
    }
    Eigen::BDCSVD<ComplexMatrix> svd(x);
    return svd.singularValues();
}

} // namespace

HankelLift::HankelLift(Index n) : n_(n)
{
    if (n < 1)
    {
        throw ArgumentError("Hankel order N must be >= 1");
    }
    const Index len = ambient_len();
    weights_.resize(len);
    d_diag_.resize(len);
    for (Index j = 0; j < len; ++j)
    {
        weights_[j] = static_cast<double>(std::min(j + 1, len - j));
        d_diag_[j]  = std::sqrt(weights_[j]);
    }
}

void HankelLift::check_vector(const ComplexVector& v) const
{
    check_signal(v, n_);
}

ComplexVector HankelLift::weight_apply(const ComplexVector& x,
                                       bool inverse) const
{
    check_vector(x);
    if (inverse)
    {
        return x.cwiseQuotient(d_diag_.cast<Complex>());
    }
    return x.cwiseProduct(d_diag_.cast<Complex>());
}

ComplexMatrix HankelLift::lift(const ComplexVector& y) const
{
    check_vector(y);
    ComplexMatrix out(n_, n_);
    for (Index k = 0; k < n_; ++k)
    {
        for (Index j = 0; j < n_; ++j)
        {
            out(j, k) = y[j + k] / d_diag_[j + k];
        }
    }
    return out;
}

ComplexVector HankelLift::lift_adjoint(const ComplexMatrix& x) const
{
    if (x.rows() != n_ || x.cols() != n_)
    {
        throw ArgumentError("lift_adjoint expects a " + std::to_string(n_) +
                            "x" + std::to_string(n_) + " matrix");
    }
    ComplexVector out = ComplexVector::Zero(ambient_len());
    for (Index k = 0; k < n_; ++k)
    {
        for (Index j = 0; j < n_; ++j)
        {
            out[j + k] += x(j, k);
        }
    }
    return out.cwiseQuotient(d_diag_.cast<Complex>());
}

ComplexMatrix HankelLift::project(const ComplexMatrix& x) const
{
    return lift(lift_adjoint(x));
}

ComplexMatrix hankel_map(const ComplexVector& x, Index n)
{
    check_signal(x, n);
    ComplexMatrix out(n, n);
    for (Index k = 0; k < n; ++k)
    {
        out.col(k) = x.segment(k, n);
    }
    return out;
}

ComplexMatrix toeplitz_map(const ComplexVector& x, Index n)
{
    check_signal(x, n);
    ComplexMatrix out(n, n);
    for (Index j = 0; j < n; ++j)
    {
        for (Index i = 0; i < n; ++i)
        {
            out(i, j) = x[n - 1 + i - j];
        }
    }
    return out;
}

ComplexMatrix lift(const ComplexVector& y, Index n)
{
    return HankelLift(n).lift(y);
}

ComplexVector lift_adjoint(const ComplexMatrix& x)
{
    if (x.rows() != x.cols() || x.rows() < 1)
    {
        throw ArgumentError("lift_adjoint expects a non-empty square matrix");
    }
    return HankelLift(x.rows()).lift_adjoint(x);
}

ComplexVector weight_apply(const ComplexVector& x, bool inverse)
{
    return HankelLift(order_from_length(x.size())).weight_apply(x, inverse);
}

double nuclear_norm(const ComplexMatrix& x)
{
    return singular_values(x).sum();
}

double spectral_norm(const ComplexMatrix& x)
{
    const RealVector s = singular_values(x);
    return s.size() == 0 ? 0.0 : s.maxCoeff();
}

Index numerical_rank(const ComplexMatrix& x, double rel_tol)
{
    const RealVector s = singular_values(x);
    if (s.size() == 0 || s[0] == 0.0)
    {
        return 0;
    }
    const double cut = rel_tol * s[0];
    return static_cast<Index>((s.array() > cut).count());
}

double default_rank_tolerance(const ComplexMatrix& x)
{
    return static_cast<double>(std::max(x.rows(), x.cols())) *
           std::numeric_limits<double>::epsilon() * 1e3;
}

} // namespace hankel
