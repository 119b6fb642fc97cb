#include <doctest.h>

#include <cmath>
#include <random>

#include "complab/specfun.hpp"

using namespace complab;

TEST_CASE("riccati-bessel matches elementary closed forms")
{
    for (double x : {0.3, 1.0, 2.7, 9.5, 40.0}) {
        const double s = std::sin(x), c = std::cos(x);
        const WaveValues w0 = riccati_bessel(0, x);
        CHECK(w0.f == doctest::Approx(s).epsilon(1e-13));
        CHECK(w0.g == doctest::Approx(c).epsilon(1e-13));
        CHECK(w0.fp == doctest::Approx(c).epsilon(1e-13));
        const WaveValues w1 = riccati_bessel(1, x);
        CHECK(w1.f == doctest::Approx(s / x - c).epsilon(1e-12));
        CHECK(w1.g == doctest::Approx(c / x + s).epsilon(1e-12));
        const WaveValues w2 = riccati_bessel(2, x);
        CHECK(w2.f == doctest::Approx((3.0 / (x * x) - 1.0) * s - 3.0 * c / x).epsilon(1e-11));
    }
}

TEST_CASE("coulomb functions reduce to riccati-bessel at eta = 0")
{
    for (int ell = 0; ell <= 6; ++ell)
        for (double rho : {0.5, 3.0, 25.0}) {
            const WaveValues c = coulomb_wave(CoulombParams{static_cast<double>(ell), 0.0}, rho);
            const WaveValues r = riccati_bessel(ell, rho);
            const double scale = std::max({1.0, std::abs(r.f), std::abs(r.g)});
            CHECK(std::abs(c.f - r.f) / scale < 1e-9);
            CHECK(std::abs(c.g - r.g) / scale < 1e-9);
        }
}

TEST_CASE("coulomb wronskian property over seeded random arguments")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        const double ell = std::floor(11 * U(rng)), eta = -5 + 10 * U(rng), rho = 0.1 + 99.9 * U(rng);
        const ScaledWave s = coulomb_wave_scaled(CoulombParams{ell, eta}, rho);
        CHECK(std::abs(s.w.fp * s.w.g - s.w.f * s.w.gp - 1.0) < 1e-9);
    }
}

TEST_CASE("l = 0 coulomb function at small eta follows the series in eta")
{
    // F_0 = C0(eta) rho (1 + eta rho + ...) near the origin, C0^2 = 2 pi eta / (exp(2 pi eta) - 1).
    const double eta = 0.3, rho = 1e-4;
    const double C0 = std::sqrt(2 * M_PI * eta / std::expm1(2 * M_PI * eta));
    const WaveValues w = coulomb_wave(CoulombParams{0.0, eta}, rho);
    CHECK(w.f == doctest::Approx(C0 * rho * (1 + eta * rho)).epsilon(1e-7));
}

TEST_CASE("bessel zeros: l = 0 gives integer multiples of pi / R")
{
    const auto z = bessel_zeros(0, M_PI, 10);
    REQUIRE(z.size() == 10);
    for (int i = 0; i < 10; ++i) CHECK(z[static_cast<std::size_t>(i)] == doctest::Approx(i + 1).epsilon(1e-13));
    // l = 1: tan x = x, first root 4.4934094579...
    CHECK(bessel_zeros(1, 1.0, 1)[0] == doctest::Approx(4.493409457909064).epsilon(1e-12));
}

TEST_CASE("sine and cosine integrals against their series")
{
    for (double x : {0.2, 1.0, 3.0}) {
        double si = 0, ci = 0.57721566490153286 + std::log(x), term = x;
        for (int n = 0; n < 40; ++n) {
            si += term / (2 * n + 1);
            term *= -x * x / ((2 * n + 2) * (2 * n + 3));
        }
        double t2 = -x * x / 2;
        for (int n = 1; n < 40; ++n) {
            ci += t2 / (2 * n);
            t2 *= -x * x / ((2 * n + 1) * (2 * n + 2));
        }
        CHECK(sine_integral(x) == doctest::Approx(si).epsilon(1e-13));
        CHECK(cosine_integral(x) == doctest::Approx(ci).epsilon(1e-12));
    }
}

TEST_CASE("digamma at small integers")
{
    CHECK(digamma(1.0) == doctest::Approx(-0.57721566490153286).epsilon(1e-14));
    CHECK(digamma(4.0) == doctest::Approx(-0.57721566490153286 + 1 + 0.5 + 1.0 / 3).epsilon(1e-14));
}

TEST_CASE("modified riccati pair for order one half")
{
    const ModifiedPair p = modified_riccati(0.5, 1.7);
    CHECK(p.regular == doctest::Approx(std::sinh(1.7)).epsilon(1e-12));
    CHECK(p.decaying == doctest::Approx(std::exp(-1.7)).epsilon(1e-12));
}
