#ifndef HANKEL_RANDOM_HPP
#define HANKEL_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

#include <hankel/types.hpp>

namespace hankel
{

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Stable across platforms and releases.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Order-sensitive hash of a seed and a tuple of integer keys.
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> keys)
{
    std::uint64_t h = mix64(base);
    for (auto k : keys)
    {
        h = mix64(h ^ mix64(k));
    }
    return h;
}

/// Complex sample whose real and imaginary parts are i.i.d. N(0, 1).
inline Complex complex_gaussian(Rng& rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

inline ComplexVector complex_gaussian_vector(Index len, Rng& rng)
{
    ComplexVector v(len);
    for (Index i = 0; i < len; ++i)
    {
        v[i] = complex_gaussian(rng);
    }
    return v;
}

} // namespace hankel

#endif // HANKEL_RANDOM_HPP
