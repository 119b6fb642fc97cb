#include <doctest.h>

#include <cmath>
#include <functional>

#include "complab/asymptotics.hpp"
#include "complab/potential.hpp"
#include "complab/solver.hpp"
#include "complab/specfun.hpp"

using namespace complab;

namespace {

double bisect(const std::function<double(double)>& f, double a, double b)
{
    double fa = f(a);
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (a + b), fm = f(m);
        if ((fm < 0) == (fa < 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

// l = 0 square well of depth 3 on [0, 2]: phase shift from tan(k R0 + d) = (k / q) tan(q R0).
double sw_phase(double k)
{
    const double q = std::sqrt(k * k + 3.0);
    return std::atan(k / q * std::tan(2.0 * q)) - 2.0 * k;
}

}  // namespace

TEST_CASE("free box eigenmomenta are the integers for R = pi")
{
    const auto ks = find_box_momenta(free_particle(0, 1), M_PI, 50.5);
    REQUIRE(ks.size() == 50);
    for (std::size_t i = 0; i < ks.size(); ++i) CHECK(std::abs(ks[i] - double(i + 1)) < 1e-10);
}

TEST_CASE("square-well bound state matches the transcendental condition")
{
    // q cot(q R0) = -kappa with q = sqrt(3 - kappa^2).
    const double kappa = bisect(
        [](double k) {
            const double q = std::sqrt(3.0 - k * k);
            return q * std::cos(2 * q) + k * std::sin(2 * q);
        },
        0.05, std::sqrt(3.0) - 1e-9);
    const auto kap = find_box_kappas(square_well(-3, 2), 40);
    REQUIRE(kap.size() == 1);
    CHECK(kap[0] == doctest::Approx(kappa).epsilon(1e-9));
}

TEST_CASE("square-well box momenta satisfy sin(kR + delta) = 0")
{
    const double R = 20;
    const auto ks = find_box_momenta(square_well(-3, 2), R, 6.0);
    REQUIRE(ks.size() > 30);
    for (double k : ks) CHECK(std::abs(std::sin(k * R + sw_phase(k))) < 1e-9);
}

TEST_CASE("open-state phase shift agrees with the analytic square-well value mod pi")
{
    for (double k : {0.3, 1.0, 4.0}) {
        const OpenState s = open_state(square_well(-3, 2), k, {1.0});
        CHECK(std::abs(std::sin(s.phase_shift - sw_phase(k))) < 1e-9);
    }
}

TEST_CASE("box states: consecutive node counts and unit norms")
{
    const auto spec = square_well(-3, 2);
    SpectrumRequest req;
    req.R = 20;
    req.k_max = 4.0;
    const BoxSpectrum sp = solve_box_spectrum(spec, req);
    REQUIRE(sp.bound.size() == 1);
    CHECK(sp.bound[0].nodes == 0);
    for (std::size_t i = 0; i < sp.scattering.size(); ++i) {
        CHECK(sp.scattering[i].nodes == static_cast<int>(i + 1));
        CHECK(sp.scattering[i].norm2 * sp.scattering[i].spacing == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("pure coulomb regular solution is proportional to F")
{
    for (double Vc : {-1.0, 2.0}) {
        const double k = 1.3, eta = Vc / (2 * k);
        const RadialFunction u = integrate_regular(pure_coulomb(Vc, 1, 1.0), k * k, RadialGrid::uniform(20.0, 2000));
        const double r_ref = 10.0;
        const double scale = u.at(r_ref) / coulomb_wave(CoulombParams{1.0, eta}, k * r_ref).f;
        for (double r : {0.5, 3.0, 7.7, 15.0}) {
            const double F = coulomb_wave(CoulombParams{1.0, eta}, k * r).f;
            CHECK(std::abs(u.at(r) - scale * F) <= 1e-7 * std::abs(scale) * std::max(1.0, std::abs(F)));
        }
    }
}

TEST_CASE("square well primitive and turning point")
{
    const auto spec = square_well(-3, 2);
    CHECK(integrated_potential(spec, 1.5) == doctest::Approx(-4.5).epsilon(1e-10));
    CHECK(repulsive_turning_point(free_particle(1, 1.0), 2.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("non-local part changes the state but keeps node ordering")
{
    const auto local = square_well(-3, 2);
    const auto nl = composite({local, gaussian_nonlocal(2.0, 0.5, 2.0)});
    SpectrumRequest req;
    req.R = 20;
    req.k_max = 2.0;
    const BoxSpectrum a = solve_box_spectrum(local, req);
    const BoxSpectrum b = solve_box_spectrum(nl, req);
    REQUIRE(!b.scattering.empty());
    for (std::size_t i = 0; i < b.scattering.size(); ++i)
        CHECK(b.scattering[i].nodes == static_cast<int>(b.bound.size() + i));
    CHECK(std::abs(a.scattering[0].momentum - b.scattering[0].momentum) > 1e-6);
}
