#ifndef HANKEL_MEASUREMENT_HPP
#define HANKEL_MEASUREMENT_HPP

#include <cstdint>

#include <hankel/hankel_core.hpp>
#include <hankel/types.hpp>

namespace hankel
{

/// Measured data b = B D x + eta together with the noise level ||eta||_2.
struct Observation
{
    ComplexVector b;
    double delta = 0.0;
};

///
/// Scaled Gaussian measurement ensemble A = B D, with B an M x (2N-1) complex
/// matrix and D = diag(sqrt(K_j)).
///
/// The SVD of B is computed once at construction and drives both feasibility
/// projections used by the solver. Instances are immutable and safe to share
/// between threads.
///
class MeasurementEnsemble
{
public:
    MeasurementEnsemble(ComplexMatrix b_matrix, Index n);

    Index m() const noexcept { return b_.rows(); }
    Index n() const noexcept { return lift_.n(); }
    Index ambient_len() const noexcept { return lift_.ambient_len(); }
    Index rank() const noexcept { return rank_; }

    const ComplexMatrix& b_matrix() const noexcept { return b_; }
    const HankelLift& lift() const noexcept { return lift_; }
    const RealVector& singular_values() const noexcept { return sigma_; }

    /// True when B has full row rank and M <= 2N-1.
    bool full_row_rank() const noexcept { return rank_ == m(); }

    /// True when B y = b pins down y uniquely (trivial null space).
    bool injective() const noexcept { return rank_ == ambient_len(); }

    /// Orthonormal basis of null(B), (2N-1) x (2N-1 - rank).
    ComplexMatrix null_space() const;

    /// B y.
    ComplexVector apply(const ComplexVector& y) const;

    /// B D x, the noise-free measurement of a raw signal.
    ComplexVector apply_weighted(const ComplexVector& x) const;

    /// argmin ||y - v|| subject to B y = b:  y = v - B^+ (B v - b).
    /// Throws NumericalError unless B has full row rank.
    ComplexVector project_affine(const ComplexVector& v,
                                 const ComplexVector& b) const;

    ///
    /// argmin ||y - v|| subject to ||B y - b|| <= delta.
    ///
    /// Outside the ball the solution is y = (I + lambda B^H B)^{-1}(v + lambda
    /// B^H b); the multiplier lambda > 0 is found by a safeguarded Newton
    /// iteration on 1/||B y(lambda) - b|| - 1/delta in the singular basis of B.
    /// delta == 0 falls back to project_affine.
    ///
    ComplexVector project_ball(const ComplexVector& v, const ComplexVector& b,
                               double delta) const;

private:
    void check_signal(const ComplexVector& v) const;
    void check_data(const ComplexVector& b) const;

    ComplexMatrix b_;
    HankelLift lift_;
    ComplexMatrix u_;     // M x k, k = min(M, 2N-1)
    RealVector sigma_;    // k
    ComplexMatrix v_;     // (2N-1) x (2N-1)
    Index rank_ = 0;
};

/// B with real and imaginary parts i.i.d. N(0, 1); deterministic in `seed`.
MeasurementEnsemble sample_ensemble(Index m, Index n, std::uint64_t seed);

///
/// b = B D x + eta with eta a complex Gaussian direction rescaled so that
/// ||eta||_2 == noise_delta. No noise is drawn when noise_delta == 0.
///
Observation measure(const MeasurementEnsemble& ens, const ComplexVector& x,
                    double noise_delta, std::uint64_t seed);

} // namespace hankel

#endif // HANKEL_MEASUREMENT_HPP
