#include "complab/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_expint.h>

namespace complab {

namespace {

bool is_integer(double v) { return v == std::floor(v) && std::abs(v) < 1e6; }

void check_ell(double ell)
{
    if (!(ell >= -0.5)) throw SpecfunError("angular momentum below -1/2: " + std::to_string(ell));
}

}  // namespace

WaveValues riccati_bessel(double ell, double x)
{
    check_ell(ell);
    if (!(x >= 0.0)) throw SpecfunError("riccati_bessel: negative argument");
    WaveValues w;
    if (ell == 0.0) {
        w.f = std::sin(x);
        w.fp = std::cos(x);
        w.g = std::cos(x);
        w.gp = -std::sin(x);
        return w;
    }
    if (x == 0.0) {
        // regular value and slope vanish for ell > 0 (slope 1 only at ell = 0)
        w.f = 0.0;
        w.fp = ell == -0.5 ? std::numeric_limits<double>::infinity() : 0.0;
        w.g = std::numeric_limits<double>::infinity();
        w.gp = -std::numeric_limits<double>::infinity();
        return w;
    }
    namespace bm = boost::math;
    if (is_integer(ell)) {
        unsigned n = static_cast<unsigned>(ell);
        double j = bm::sph_bessel(n, x), jp = bm::sph_bessel_prime(n, x);
        double y = bm::sph_neumann(n, x), yp = bm::sph_neumann_prime(n, x);
        w.f = x * j;
        w.fp = j + x * jp;
        w.g = -x * y;
        w.gp = -(y + x * yp);
        return w;
    }
    const double nu = ell + 0.5;
    const double c = std::sqrt(std::numbers::pi * x / 2);
    double J = bm::cyl_bessel_j(nu, x), Jp = bm::cyl_bessel_j_prime(nu, x);
    double Y = bm::cyl_neumann(nu, x), Yp = bm::cyl_neumann_prime(nu, x);
    w.f = c * J;
    w.fp = c * (J / (2 * x) + Jp);
    w.g = -c * Y;
    w.gp = -c * (Y / (2 * x) + Yp);
    return w;
}

std::vector<double> bessel_zeros(double ell, double R, int count)
{
    check_ell(ell);
    if (!(R > 0)) throw SpecfunError("bessel_zeros: R must be positive");
    if (count < 1) throw SpecfunError("bessel_zeros: count must be positive");
    std::vector<double> z(count);
    if (ell == 0.0) {
        for (int m = 1; m <= count; ++m) z[m - 1] = m * std::numbers::pi / R;
        return z;
    }
    const double nu = ell + 0.5;
    for (int m = 1; m <= count; ++m) {
        double x = boost::math::cyl_bessel_j_zero(nu, m);
        // one Newton polish on the Riccati form
        WaveValues w = riccati_bessel(ell, x);
        if (w.fp != 0.0) x -= w.f / w.fp;
        z[m - 1] = x / R;
    }
    return z;
}

ModifiedPair modified_riccati(double nu, double x)
{
    if (!(x > 0)) throw SpecfunError("modified_riccati: argument must be positive");
    if (x > 700.0) throw SpecfunError("modified_riccati: overflow of the regular function, rescale the argument");
    ModifiedPair p;
    p.regular = std::sqrt(std::numbers::pi * x / 2) * boost::math::cyl_bessel_i(nu, x);
    p.decaying = std::sqrt(2 * x / std::numbers::pi) * boost::math::cyl_bessel_k(nu, x);
    if (!std::isfinite(p.regular) || !std::isfinite(p.decaying))
        throw SpecfunError("modified_riccati: overflow");
    return p;
}

double digamma(double x)
{
    if (x <= 0 && x == std::floor(x)) throw SpecfunError("digamma: pole at non-positive integer");
    return boost::math::digamma(x);
}

double sine_integral(double x)
{
    gsl_sf_result r;
    gsl_set_error_handler_off();
    if (gsl_sf_Si_e(x, &r) != GSL_SUCCESS) throw SpecfunError("sine integral failed");
    return r.val;
}

double cosine_integral(double x)
{
    if (!(x > 0)) throw SpecfunError("cosine integral needs x > 0");
    gsl_sf_result r;
    gsl_set_error_handler_off();
    if (gsl_sf_Ci_e(x, &r) != GSL_SUCCESS) throw SpecfunError("cosine integral failed");
    return r.val;
}

}  // namespace complab
