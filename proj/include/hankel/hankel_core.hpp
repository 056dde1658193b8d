#ifndef HANKEL_HANKEL_CORE_HPP
#define HANKEL_HANKEL_CORE_HPP

#include <hankel/types.hpp>

namespace hankel
{

///
/// Square Hankel structure of order N over signals of length 2N-1.
///
/// Anti-diagonal j of an N x N matrix holds K_j = min(j+1, 2N-1-j) entries.
/// The normalized anti-diagonal indicator matrices E_j (entries 1/sqrt(K_j)
/// on k+l=j) form an orthonormal basis of the Hankel subspace, and the lift
/// y -> sum_j y_j E_j is an isometry from C^{2N-1} onto that subspace. The
/// diagonal weight D = diag(sqrt(K_j)) converts a raw signal x into the
/// isometric coordinates y = D x, so that lift(D x) == hankel_map(x).
///
class HankelLift
{
public:
    explicit HankelLift(Index n);

    Index n() const noexcept { return n_; }
    Index ambient_len() const noexcept { return ambient_length(n_); }

    /// K_j, the number of entries on anti-diagonal j.
    const RealVector& weights() const noexcept { return weights_; }
    /// sqrt(K_j).
    const RealVector& d_diag() const noexcept { return d_diag_; }

    /// Entrywise multiply by sqrt(K_j), or divide when `inverse` is set.
    ComplexVector weight_apply(const ComplexVector& x, bool inverse) const;

    /// out(j,k) = y(j+k) / sqrt(K_{j+k}).
    ComplexMatrix lift(const ComplexVector& y) const;

    /// out_j = <X, E_j> = (1/sqrt(K_j)) * sum_{k+l=j} X(k,l).
    ComplexVector lift_adjoint(const ComplexMatrix& x) const;

    /// Orthogonal projection of X onto the Hankel subspace: lift(lift_adjoint(X)).
    ComplexMatrix project(const ComplexMatrix& x) const;

private:
    void check_vector(const ComplexVector& v) const;

    Index n_;
    RealVector weights_;
    RealVector d_diag_;
};

/// out(j,k) = x(j+k), for x of length 2n-1.
ComplexMatrix hankel_map(const ComplexVector& x, Index n);

/// out(i,j) = x(n-1+i-j), equal to hankel_map(x) * P with P the anti-identity.
ComplexMatrix toeplitz_map(const ComplexVector& x, Index n);

/// Free-function forms over a one-off HankelLift.
ComplexMatrix lift(const ComplexVector& y, Index n);
ComplexVector lift_adjoint(const ComplexMatrix& x);
ComplexVector weight_apply(const ComplexVector& x, bool inverse);

/// Sum of singular values.
double nuclear_norm(const ComplexMatrix& x);

/// Largest singular value.
double spectral_norm(const ComplexMatrix& x);

/// Number of singular values strictly above rel_tol * sigma_max.
Index numerical_rank(const ComplexMatrix& x, double rel_tol);

/// Default relative threshold for numerical_rank: max(rows, cols) * eps * 1e3.
double default_rank_tolerance(const ComplexMatrix& x);

} // namespace hankel

#endif // HANKEL_HANKEL_CORE_HPP
