#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace complab {

struct SpecfunError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Regular/irregular pair and their derivatives with respect to the argument.
struct WaveValues {
    double f = 0, fp = 0, g = 0, gp = 0;
};

struct CoulombParams {
    double ell = 0;
    double eta = 0;
};

// Coulomb pair carried with a split exponent: F = w.f * exp(log_scale),
// G = w.g * exp(-log_scale), and likewise for the derivatives.
// The Wronskian is therefore preserved by the mantissas.
struct ScaledWave {
    WaveValues w;
    double log_scale = 0;
    WaveValues unscaled() const;
};

struct HankelValues {
    std::complex<double> outgoing, incoming, outgoing_deriv, incoming_deriv;
};

// Riccati-Bessel pair: f = x j_l(x), g = -x y_l(x), so that g +- i f -> exp(+-i(x - l pi/2)).
WaveValues riccati_bessel(double ell, double x);

// Coulomb F, G with F'G - FG' = 1 and F ~ sin(rho - eta log 2rho - l pi/2 + sigma_l).
// Throws SpecfunError when the result is not representable (see coulomb_wave_scaled).
WaveValues coulomb_wave(const CoulombParams& p, double rho);
ScaledWave coulomb_wave_scaled(const CoulombParams& p, double rho);

// h+- = G +- iF and their rho-derivatives.
HankelValues coulomb_hankel(const CoulombParams& p, double rho);

// First `count` positive roots of the Riccati-Bessel function j_l(kappa R) = 0.
std::vector<double> bessel_zeros(double ell, double R, int count);

struct ModifiedPair {
    double regular = 0;  // sqrt(pi x / 2) I_nu(x)
    double decaying = 0; // sqrt(2 x / pi) K_nu(x)
};
// nu is the order of the underlying modified Bessel functions; for nu = 1/2 the
// pair is (sinh x, exp(-x)).
ModifiedPair modified_riccati(double nu, double x);

double digamma(double x);

// Sine and cosine integrals Si(x), Ci(x) for x > 0.
double sine_integral(double x);
double cosine_integral(double x);

// Outer turning point of the Coulomb equation at unit momentum, 0 when there is none.
double coulomb_turning_point(double ell, double eta);

}  // namespace complab
