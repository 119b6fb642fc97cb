#include <doctest.h>

#include <cmath>
#include <vector>

#include "complab/completeness.hpp"
#include "complab/fit.hpp"
#include "complab/parallel.hpp"

using namespace complab;

namespace {

// Sum over m >= 1 of sin(m x + a) / m for 0 < x < 2 pi.
double sine_series_exact(double x, double a)
{
    return std::sin(a) * -std::log(2 * std::sin(x / 2)) + std::cos(a) * (M_PI - x) / 2;
}

double free_delta(double r, double rp, double K)
{
    auto sinc_part = [K](double d) { return d == 0 ? K : std::sin(K * d) / d; };
    return (sinc_part(r - rp) - sinc_part(r + rp)) / M_PI;
}

}  // namespace

TEST_CASE("abel acceleration against the closed-form sine series")
{
    for (double x : {0.05, 0.7, 2.0, 3.9, 6.1})
        for (double a : {0.0, 0.4, -1.3}) {
            const AbelResult r = abel_sum(1.0, x, a, 10000);
            CHECK(std::abs(r.accelerated - sine_series_exact(x, a)) < 1e-5);
            long double direct = 0;
            for (long m = 1; m <= 10000; ++m) direct += std::sin(m * x + a) / static_cast<long double>(m);
            CHECK(std::abs(r.direct - static_cast<double>(direct)) < 1e-12);
        }
}

TEST_CASE("classical sawtooth value")
{
    CHECK(abel_sum(1.0, 1.0, 0.0, 10000).accelerated == doctest::Approx((M_PI - 1) / 2).epsilon(1e-7));
}

TEST_CASE("closed-form tail equals exact minus partial sum")
{
    for (long M : {1L, 10L, 1000L}) {
        const double x = 1.1, a = 0.25;
        double partial = 0;
        for (long m = 1; m <= M; ++m) partial += std::sin(m * x + a) / m;
        CHECK(sine_series_tail(x, a, M) == doctest::Approx(sine_series_exact(x, a) - partial).epsilon(1e-10));
    }
}

TEST_CASE("abel sum at an endpoint needs the slope")
{
    CHECK_THROWS_AS(abel_sum(1.0, 0.0, 0.3, 100), AbelDomainError);
    CHECK_NOTHROW(abel_sum(1.0, 0.0, 0.3, 100, 0.0));
}

TEST_CASE("free coulomb delta kernel: quadrature and closed form against the sinc oracle")
{
    for (double r : {0.5, 2.0})
        for (double rp : {0.5, 1.3, 4.0}) {
            CHECK(coulomb_delta_kernel_free(r, rp, 40) == doctest::Approx(free_delta(r, rp, 40)).epsilon(1e-12));
            CHECK(std::abs(coulomb_delta_kernel(0, 0, r, rp, 40) - free_delta(r, rp, 40)) < 1e-10);
        }
}

TEST_CASE("box kernel: free particle vanishes, square well is symmetric")
{
    const auto g = default_kernel_grid(free_particle(0, 1), 10, 7);
    CHECK(kernel_box(free_particle(0, 1), 10, g, g, 100, true).max_abs() <= 1e-12);
    const auto sw = square_well(-3, 2);
    const auto gs = default_kernel_grid(sw, 20, 9);
    const KernelField k = kernel_box(sw, 20, gs, gs, 300, true);
    CHECK(k.symmetry_defect() < 1e-10);
    CHECK(k.kind == KernelKind::BoxSubtracted);
    const KernelField k2 = kernel_box(sw, 20, gs, gs, 600, true);
    CHECK(k2.max_abs() < 0.6 * k.max_abs());
}

TEST_CASE("expanding a free box state returns a unit vector")
{
    const double R = 10;
    TargetFunction t;
    t.description = "third sine";
    t.f = [R](double r) { return std::sqrt(2 / R) * std::sin(3 * M_PI * r / R); };
    const ExpansionResult e = expand_function(free_particle(0, 1), R, t, 30, {2.0});
    REQUIRE(e.scattering_coeffs.size() == 30);
    for (std::size_t i = 0; i < 30; ++i) CHECK(std::abs(e.scattering_coeffs[i] - (i == 2 ? 1.0 : 0.0)) < 1e-8);
    CHECK(e.reconstruction[0] == doctest::Approx(t.f(2.0)).epsilon(1e-8));
    CHECK(e.parseval_defect < 1e-8);
}

TEST_CASE("log-log fit recovers a synthetic slope")
{
    std::vector<double> x{2, 4, 8, 16}, y;
    for (double v : x) y.push_back(3.0 / (v * v));
    const FitReport f = fit_loglog("synthetic", x, y, -2, 0.01);
    CHECK(f.fitted_slope == doctest::Approx(-2).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(f.passed());
    const FitReport g = fit_loglog("synthetic", x, y, -1, 0.5);
    CHECK_FALSE(g.passed());
}

TEST_CASE("parallel_for results do not depend on the worker count")
{
    const int saved = workers();
    auto run = [](int n) {
        set_workers(n);
        std::vector<double> out(257);
        parallel_for(out.size(), [&](std::size_t i) { out[i] = std::sin(0.1 * static_cast<double>(i)); });
        return out;
    };
    CHECK(run(1) == run(4));
    set_workers(saved);
}
