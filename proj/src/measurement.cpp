#include <hankel/measurement.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/SVD>

#include <hankel/random.hpp>

namespace hankel
{

namespace
{

constexpr int max_bracket_steps = 400;
constexpr int max_root_steps    = 200;
constexpr double root_rel_tol   = 1e-12;

} // namespace

MeasurementEnsemble::MeasurementEnsemble(ComplexMatrix b_matrix, Index n)
    : b_(std::move(b_matrix)), lift_(n)
{
    if (b_.rows() < 1)
    {
        throw ArgumentError("measurement ensemble needs M >= 1");
    }
    if (b_.cols() != lift_.ambient_len())
    {
        throw ArgumentError("measurement matrix must have 2N-1=" +
                            std::to_string(lift_.ambient_len()) +
                            " columns, got " + std::to_string(b_.cols()));
    }
    if (!b_.allFinite())
    {
        throw ArgumentError("measurement matrix has non-finite entries");
    }

    Eigen::BDCSVD<ComplexMatrix> svd(b_, Eigen::ComputeThinU |
                                             Eigen::ComputeFullV);
    u_     = svd.matrixU();
    sigma_ = svd.singularValues();
    v_     = svd.matrixV();

    const double cut = static_cast<double>(std::max(b_.rows(), b_.cols())) *
                       std::numeric_limits<double>::epsilon() *
                       (sigma_.size() > 0 ? sigma_[0] : 0.0);
    rank_ = static_cast<Index>((sigma_.array() > cut).count());
}

void MeasurementEnsemble::check_signal(const ComplexVector& v) const
{
    if (v.size() != ambient_len())
    {
        throw ArgumentError("expected signal of length " +
                            std::to_string(ambient_len()) + ", got " +
                            std::to_string(v.size()));
    }
}

void MeasurementEnsemble::check_data(const ComplexVector& b) const
{
    if (b.size() != m())
    {
        throw ArgumentError("expected " + std::to_string(m()) +
                            " measurements, got " + std::to_string(b.size()));
    }
}

ComplexMatrix MeasurementEnsemble::null_space() const
{
    return v_.rightCols(ambient_len() - rank_);
}

ComplexVector MeasurementEnsemble::apply(const ComplexVector& y) const
{
    check_signal(y);
    return b_ * y;
}

ComplexVector MeasurementEnsemble::apply_weighted(const ComplexVector& x) const
{
    return apply(lift_.weight_apply(x, false));
}

ComplexVector MeasurementEnsemble::project_affine(const ComplexVector& v,
                                                  const ComplexVector& b) const
{
    check_signal(v);
    check_data(b);
    if (!full_row_rank())
    {
        throw NumericalError("project_affine: measurement matrix is rank "
                             "deficient (rank " +
                                 std::to_string(rank_) + " < M=" +
                                 std::to_string(m()) + ")",
                             static_cast<double>(m() - rank_));
    }
    const ComplexVector r = b_ * v - b;
    const ComplexVector coeff =
        (u_.adjoint() * r).cwiseQuotient(sigma_.cast<Complex>());
    return v - v_.leftCols(rank_) * coeff;
}

ComplexVector MeasurementEnsemble::project_ball(const ComplexVector& v,
                                                const ComplexVector& b,
                                                double delta) const
{
    check_signal(v);
    check_data(b);
    if (!(delta >= 0.0) || !std::isfinite(delta))
    {
        throw ArgumentError("project_ball: delta must be finite and >= 0");
    }

    const ComplexVector r = b_ * v - b;
    const double r_norm   = r.norm();
    if (r_norm <= delta)
    {
        return v;
    }
    if (delta == 0.0)
    {
        return project_affine(v, b);
    }

    // Residual split into the range of B (singular coordinates) and the part
    // no choice of y can remove.
    const ComplexVector rt  = u_.leftCols(rank_).adjoint() * r;
    const double perp       = (r - u_.leftCols(rank_) * rt).norm();
    if (perp >= delta)
    {
        throw NumericalError("project_ball: noise ball does not meet the range "
                             "of the measurement matrix",
                             perp);
    }

    const RealVector s2 = sigma_.head(rank_).cwiseAbs2();
    const RealVector a2 = rt.cwiseAbs2();
    const double perp2  = perp * perp;

    // g(lambda) = ||B y(lambda) - b||^2 and its derivative.
    auto residual2 = [&](double lambda, double* deriv) {
        double g  = perp2;
        double dg = 0.0;
        for (Index i = 0; i < rank_; ++i)
        {
            const double q = 1.0 / (1.0 + lambda * s2[i]);
            g += a2[i] * q * q;
            dg -= 2.0 * s2[i] * a2[i] * q * q * q;
        }
        if (deriv != nullptr)
        {
            *deriv = dg;
        }
        return g;
    };

    // psi(lambda) = 1/sqrt(g) - 1/delta is increasing in lambda, nearly
    // linear, and psi(0) < 0.
    auto psi = [&](double lambda, double* deriv) {
        double dg     = 0.0;
        const double g = residual2(lambda, &dg);
        const double root = std::sqrt(g);
        if (deriv != nullptr)
        {
            *deriv = -0.5 * dg / (g * root);
        }
        return 1.0 / root - 1.0 / delta;
    };

    double lo = 0.0;
    double hi = 1.0 / s2.maxCoeff();
    int steps = 0;
    while (psi(hi, nullptr) < 0.0)
    {
        lo = hi;
        hi *= 2.0;
        if (++steps > max_bracket_steps || !std::isfinite(hi))
        {
            throw NumericalError("project_ball: failed to bracket the "
                                 "Lagrange multiplier (residual " +
                                     std::to_string(std::sqrt(residual2(
                                         lo, nullptr))) +
                                     ", delta " + std::to_string(delta) + ")",
                                 std::sqrt(residual2(lo, nullptr)));
        }
    }

    double lambda = hi;
    for (int it = 0; it < max_root_steps; ++it)
    {
        double d           = 0.0;
        const double value = psi(lambda, &d);
        if (std::abs(value) * delta <= root_rel_tol)
        {
            break;
        }
        if (value < 0.0)
        {
            lo = lambda;
        }
        else
        {
            hi = lambda;
        }
        double next = (d > 0.0) ? lambda - value / d : -1.0;
        if (!(next > lo && next < hi))
        {
            next = 0.5 * (lo + hi);
        }
        if (hi - lo <= root_rel_tol * hi)
        {
            lambda = hi;
            break;
        }
        lambda = next;
    }

    ComplexVector coeff(rank_);
    for (Index i = 0; i < rank_; ++i)
    {
        coeff[i] = -lambda * sigma_[i] * rt[i] / (1.0 + lambda * s2[i]);
    }
    return v + v_.leftCols(rank_) * coeff;
}

MeasurementEnsemble sample_ensemble(Index m, Index n, std::uint64_t seed)
{
    if (m < 1 || n < 1)
    {
        throw ArgumentError("sample_ensemble needs M >= 1 and N >= 1");
    }
    Rng rng(seed);
    const Index len = ambient_length(n);
    ComplexMatrix b(m, len);
    // Row-major fill so the draw order does not depend on storage order.
    for (Index i = 0; i < m; ++i)
    {
        for (Index j = 0; j < len; ++j)
        {
            b(i, j) = complex_gaussian(rng);
        }
    }
    return MeasurementEnsemble(std::move(b), n);
}

Observation measure(const MeasurementEnsemble& ens, const ComplexVector& x,
                    double noise_delta, std::uint64_t seed)
{
    if (!(noise_delta >= 0.0) || !std::isfinite(noise_delta))
    {
        throw ArgumentError("measure: noise level must be finite and >= 0");
    }
    Observation obs;
    obs.b     = ens.apply_weighted(x);
    obs.delta = noise_delta;
    if (noise_delta > 0.0)
    {
        Rng rng(seed);
        ComplexVector eta = complex_gaussian_vector(ens.m(), rng);
        obs.b += eta * (noise_delta / eta.norm());
    }
    return obs;
}

} // namespace hankel
