#include <hankel/modal.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <hankel/hankel_core.hpp>
#include <hankel/random.hpp>

namespace hankel
{

ComplexVector synthesize(const ModalSignal& sig)
{
    if (sig.n < 1)
    {
        throw ArgumentError("ModalSignal needs N >= 1");
    }
    const Index len = ambient_length(sig.n);
    if (static_cast<Index>(sig.modes.size()) >= len)
    {
        throw ArgumentError("number of modes R=" +
                            std::to_string(sig.modes.size()) +
                            " must be below 2N-1=" + std::to_string(len));
    }
    ComplexVector x = ComplexVector::Zero(len);
    for (const auto& mode : sig.modes)
    {
        Complex term = mode.c;
        for (Index j = 0; j < len; ++j)
        {
            x[j] += term;
            term *= mode.z;
        }
    }
    return x;
}

ModalSignal random_instance(Index n, Index r, ModeFamily family,
                            std::uint64_t seed, double tau_max)
{
    if (n < 1)
    {
        throw ArgumentError("random_instance needs N >= 1");
    }
    if (r < 1 || r >= ambient_length(n))
    {
        throw ArgumentError("random_instance needs 1 <= R < 2N-1, got R=" +
                            std::to_string(r));
    }
    if (!(tau_max >= 0.0))
    {
        throw ArgumentError("tau_max must be nonnegative");
    }

    constexpr double two_pi = 2.0 * std::numbers::pi;
    Rng rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    ModalSignal sig;
    sig.n = n;
    sig.modes.reserve(static_cast<std::size_t>(r));
    for (Index k = 0; k < r; ++k)
    {
        const double f = unit(rng);
        double tau     = 0.0;
        if (family == ModeFamily::damped)
        {
            tau = tau_max * unit(rng);
        }
        const double phase     = two_pi * unit(rng);
        const double magnitude = 1.0 + std::pow(10.0, 0.5 * unit(rng));

        sig.modes.push_back({std::exp(-tau) * std::polar(1.0, two_pi * f),
                             std::polar(magnitude, phase)});
    }
    return sig;
}

std::vector<Mode> matrix_pencil(const ComplexVector& x, Index r,
                                const PencilOptions& opts)
{
    const Index len = x.size();
    if (len < 1 || len % 2 == 0)
    {
        throw ArgumentError("matrix_pencil expects a signal of odd length 2N-1");
    }
    const Index n = (len + 1) / 2;
    if (r < 1 || r > n - 1)
    {
        throw ArgumentError("matrix_pencil needs 1 <= r <= N-1, got r=" +
                            std::to_string(r) + " with N=" + std::to_string(n));
    }
    const double x_norm = x.norm();
    if (x_norm == 0.0)
    {
        throw ArgumentError("matrix_pencil: signal is identically zero");
    }

    const ComplexMatrix h  = hankel_map(x, n);
    const ComplexMatrix h0 = h.topRows(n - 1);
    const ComplexMatrix h1 = h.bottomRows(n - 1);

    Eigen::BDCSVD<ComplexMatrix> svd(h0, Eigen::ComputeThinU |
                                             Eigen::ComputeThinV);
    const RealVector& s = svd.singularValues();
    if (s[r - 1] <= std::numeric_limits<double>::epsilon() * s[0])
    {
        throw NumericalError("matrix_pencil: shifted Hankel matrix has rank "
                             "below r",
                             s[r - 1] / s[0]);
    }
    const ComplexMatrix ur = svd.matrixU().leftCols(r);
    const ComplexMatrix vr = svd.matrixV().leftCols(r);
    const ComplexMatrix reduced =
        s.head(r).cwiseInverse().asDiagonal() * (ur.adjoint() * h1 * vr);

    Eigen::ComplexEigenSolver<ComplexMatrix> eig(reduced, false);
    if (eig.info() != Eigen::Success)
    {
        throw NumericalError("matrix_pencil: eigenvalue solver failed");
    }
    const ComplexVector poles = eig.eigenvalues();

    ComplexMatrix vander(len, r);
    for (Index k = 0; k < r; ++k)
    {
        Complex power = 1.0;
        for (Index j = 0; j < len; ++j)
        {
            vander(j, k) = power;
            power *= poles[k];
        }
    }
    const ComplexVector amps =
        vander.completeOrthogonalDecomposition().solve(x);
    const double residual = (vander * amps - x).norm() / x_norm;
    if (!(residual <= opts.max_rel_residual))
    {
        throw NumericalError("matrix_pencil: re-synthesis residual " +
                                 std::to_string(residual) + " above tolerance",
                             residual);
    }

    std::vector<Mode> modes;
    modes.reserve(static_cast<std::size_t>(r));
    for (Index k = 0; k < r; ++k)
    {
        modes.push_back({poles[k], amps[k]});
    }
    sort_by_phase(modes);
    return modes;
}

void sort_by_phase(std::vector<Mode>& modes)
{
    std::sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) {
        const double pa = std::arg(a.z);
        const double pb = std::arg(b.z);
        if (pa != pb)
        {
            return pa < pb;
        }
        return std::abs(a.z) < std::abs(b.z);
    });
}

double max_pole_error(const std::vector<Mode>& truth,
                      const std::vector<Mode>& found)
{
    if (truth.size() != found.size())
    {
        throw ArgumentError("max_pole_error: mode counts differ");
    }
    std::vector<Mode> a = truth;
    std::vector<Mode> b = found;
    sort_by_phase(a);
    sort_by_phase(b);

    std::vector<bool> used(b.size(), false);
    double worst = 0.0;
    for (const auto& t : a)
    {
        std::size_t best = b.size();
        double best_err  = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < b.size(); ++i)
        {
            if (used[i])
            {
                continue;
            }
            const double err = std::abs(b[i].z - t.z);
            if (err < best_err)
            {
                best_err = err;
                best     = i;
            }
        }
        used[best] = true;
        worst      = std::max(worst, best_err);
    }
    return worst;
}

} // namespace hankel
