#include <doctest.h>

#include <cmath>
#include <numbers>

#include <hankel/hankel_core.hpp>
#include <hankel/modal.hpp>

#include "test_support.hpp"

using namespace hankel;

namespace
{

constexpr double two_pi = 2.0 * std::numbers::pi;

double frequency_of(Complex z)
{
    double f = std::arg(z) / two_pi;
    return f < 0.0 ? f + 1.0 : f;
}

} // namespace

TEST_CASE("synthesize")
{
    SUBCASE("constant mode")
    {
        const ComplexVector x = synthesize({{{1.0, 1.0}}, 3});
        REQUIRE(x.size() == 5);
        CHECK((x - ComplexVector::Ones(5)).norm() == 0.0);
    }
    SUBCASE("alternating mode")
    {
        const ComplexVector x = synthesize({{{-1.0, 2.0}}, 2});
        CHECK(x[0] == Complex(2.0));
        CHECK(x[1] == Complex(-2.0));
        CHECK(x[2] == Complex(2.0));
    }
    SUBCASE("quarter turn")
    {
        const ComplexVector x =
            synthesize({{{std::polar(1.0, two_pi * 0.25), 1.0}}, 2});
        CHECK(std::abs(x[0] - Complex(1.0, 0.0)) <= 1e-15);
        CHECK(std::abs(x[1] - Complex(0.0, 1.0)) <= 1e-15);
        CHECK(std::abs(x[2] - Complex(-1.0, 0.0)) <= 1e-15);
    }
    SUBCASE("linear in the amplitudes")
    {
        ModalSignal a = random_instance(9, 3, ModeFamily::damped, 1);
        ModalSignal b = a;
        ModalSignal sum = a;
        const Complex alpha(0.7, -1.1);
        const Complex beta(-2.0, 0.25);
        for (std::size_t k = 0; k < a.modes.size(); ++k)
        {
            b.modes[k].c   = Complex(1.0 + k, 0.5 * k);
            sum.modes[k].c = alpha * a.modes[k].c + beta * b.modes[k].c;
        }
        const ComplexVector lhs = synthesize(sum);
        const ComplexVector rhs = alpha * synthesize(a) + beta * synthesize(b);
        CHECK((lhs - rhs).norm() <= 1e-12 * rhs.norm());
    }
    SUBCASE("too many modes")
    {
        ModalSignal sig{{}, 2};
        sig.modes.assign(3, Mode{0.5, 1.0});
        CHECK_THROWS_AS(synthesize(sig), ArgumentError);
    }
}

TEST_CASE("random_instance")
{
    SUBCASE("amplitude law")
    {
        for (std::uint64_t seed = 0; seed < 200; ++seed)
        {
            const auto sig = random_instance(4, 5, ModeFamily::sinusoid, seed);
            for (const auto& mode : sig.modes)
            {
                CHECK(std::abs(mode.c) >= 2.0 - 1e-12);
                CHECK(std::abs(mode.c) <= 1.0 + std::sqrt(10.0) + 1e-12);
                CHECK(std::abs(std::abs(mode.z) - 1.0) <= 1e-14);
            }
        }
    }
    SUBCASE("damped poles lie inside the disk")
    {
        const auto sig = random_instance(16, 6, ModeFamily::damped, 77);
        for (const auto& mode : sig.modes)
        {
            CHECK(std::abs(mode.z) <= 1.0);
            CHECK(std::abs(mode.z) >= std::exp(-default_tau_max) - 1e-15);
        }
    }
    SUBCASE("deterministic in the seed")
    {
        const auto a = random_instance(16, 4, ModeFamily::damped, 99);
        const auto b = random_instance(16, 4, ModeFamily::damped, 99);
        const auto c = random_instance(16, 4, ModeFamily::damped, 100);
        REQUIRE(a.modes.size() == b.modes.size());
        for (std::size_t k = 0; k < a.modes.size(); ++k)
        {
            CHECK(a.modes[k].z == b.modes[k].z);
            CHECK(a.modes[k].c == b.modes[k].c);
        }
        CHECK(a.modes[0].z != c.modes[0].z);
    }
    SUBCASE("frequencies are uniform on [0, 1)")
    {
        double sum = 0.0;
        int count  = 0;
        for (std::uint64_t seed = 0; seed < 2500; ++seed)
        {
            for (const auto& mode :
                 random_instance(4, 4, ModeFamily::sinusoid, seed).modes)
            {
                sum += frequency_of(mode.z);
                ++count;
            }
        }
        CHECK(count == 10000);
        CHECK(std::abs(sum / count - 0.5) <= 0.02);
    }
    SUBCASE("range checks")
    {
        CHECK_THROWS_AS(random_instance(2, 3, ModeFamily::sinusoid, 0),
                        ArgumentError);
        CHECK_THROWS_AS(random_instance(2, 0, ModeFamily::sinusoid, 0),
                        ArgumentError);
    }
}

TEST_CASE("matrix_pencil")
{
    SUBCASE("constant signal")
    {
        const auto modes = matrix_pencil(ComplexVector::Ones(5), 1);
        REQUIRE(modes.size() == 1);
        CHECK(std::abs(modes[0].z - 1.0) <= 1e-12);
        CHECK(std::abs(modes[0].c - 1.0) <= 1e-12);
    }
    SUBCASE("two sinusoids")
    {
        const auto sig   = random_instance(8, 2, ModeFamily::sinusoid, 4);
        const auto modes = matrix_pencil(synthesize(sig), 2);
        CHECK(max_pole_error(sig.modes, modes) <= 1e-8);
    }
    SUBCASE("three damped modes")
    {
        const auto sig        = random_instance(16, 3, ModeFamily::damped, 8);
        const ComplexVector x = synthesize(sig);
        const auto modes      = matrix_pencil(x, 3);
        for (const auto& mode : modes)
        {
            CHECK(std::abs(mode.z) < 1.0);
        }
        const ComplexVector again = synthesize({modes, 16});
        CHECK((again - x).norm() / x.norm() < 1e-6);
        CHECK(max_pole_error(sig.modes, modes) <= 1e-8);
    }
    SUBCASE("round trip over random instances")
    {
        for (std::uint64_t seed = 0; seed < 20; ++seed)
        {
            for (auto family : {ModeFamily::sinusoid, ModeFamily::damped})
            {
                const Index r    = 1 + static_cast<Index>(seed % 4);
                const auto sig   = random_instance(16, r, family, seed);
                const auto modes = matrix_pencil(synthesize(sig), r);
                CHECK(max_pole_error(sig.modes, modes) <= 1e-8);
            }
        }
    }
    SUBCASE("order out of range")
    {
        CHECK_THROWS_AS(matrix_pencil(ComplexVector::Ones(7), 4), ArgumentError);
        CHECK_THROWS_AS(matrix_pencil(ComplexVector::Ones(7), 0), ArgumentError);
        CHECK_THROWS_AS(matrix_pencil(ComplexVector::Ones(6), 1), ArgumentError);
    }
    SUBCASE("under-modelled signal reports the residual")
    {
        const auto sig = random_instance(16, 3, ModeFamily::sinusoid, 31);
        try
        {
            matrix_pencil(synthesize(sig), 1);
            FAIL("expected NumericalError");
        }
        catch (const NumericalError& e)
        {
            CHECK(e.residual() > 1e-6);
        }
    }
}

TEST_CASE("synthesized signals have Hankel rank R")
{
    for (std::uint64_t seed = 0; seed < 12; ++seed)
    {
        const Index r         = 1 + static_cast<Index>(seed % 6);
        const ComplexVector x = synthesize(
            random_instance(16, r, ModeFamily::sinusoid, 500 + seed));
        const ComplexMatrix h = hankel_map(x, 16);
        CHECK(numerical_rank(h, default_rank_tolerance(h)) == r);
    }
}
