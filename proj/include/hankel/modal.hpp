#ifndef HANKEL_MODAL_HPP
#define HANKEL_MODAL_HPP

#include <cstdint>
#include <vector>

#include <hankel/types.hpp>

namespace hankel
{

/// One exponential mode c * z^j.
struct Mode
{
    Complex z;
    Complex c;
};

/// Superposition of exponential modes sampled at j = 0, ..., 2N-2.
struct ModalSignal
{
    std::vector<Mode> modes;
    Index n = 0; ///< Hankel order N; the signal has 2N-1 samples.
};

enum class ModeFamily
{
    sinusoid, ///< |z| = 1
    damped,   ///< z = exp(-tau) exp(2 pi i f)
};

/// Default upper bound of the damping rate tau for the damped family.
inline constexpr double default_tau_max = 0.5;

/// x_j = sum_k c_k z_k^j for j = 0..2N-2.
ComplexVector synthesize(const ModalSignal& sig);

///
/// Random test instance: f ~ U[0,1], arg(c) ~ U[0, 2 pi], |c| = 1 + 10^(0.5 m)
/// with m ~ U[0,1]. The damped family additionally draws tau ~ U[0, tau_max].
/// Deterministic in `seed`.
///
ModalSignal random_instance(Index n, Index r, ModeFamily family,
                            std::uint64_t seed,
                            double tau_max = default_tau_max);

/// Options for matrix_pencil.
struct PencilOptions
{
    /// Largest accepted ||synthesize(result) - x|| / ||x||.
    double max_rel_residual = 1e-6;
};

///
/// Matrix pencil extraction of `r` modes from samples x of length 2N-1.
///
/// H0 and H1 are the N x N Hankel matrix of x with its last and its first row
/// removed. The pencil (H1, H0) is reduced onto the dominant rank-r subspace
/// of H0 and its eigenvalues are the poles. Amplitudes come from a
/// least-squares Vandermonde fit over all samples. Modes are returned sorted
/// by arg(z).
///
/// Throws ArgumentError when r is outside [1, N-1], NumericalError (with the
/// re-synthesis residual) when the fit misses `max_rel_residual`.
///
std::vector<Mode> matrix_pencil(const ComplexVector& x, Index r,
                                const PencilOptions& opts = {});

/// Sort modes by arg(z) in (-pi, pi], ties broken by |z|.
void sort_by_phase(std::vector<Mode>& modes);

/// Greedy nearest-pole pairing of `found` against `truth`; returns the largest
/// |z_found - z_truth| over matched pairs. Sizes must agree.
double max_pole_error(const std::vector<Mode>& truth,
                      const std::vector<Mode>& found);

} // namespace hankel

#endif // HANKEL_MODAL_HPP
