#pragma once

#include <vector>

#include "complab/potential.hpp"
#include "complab/quadrature.hpp"

namespace complab::detail {

// Sorted union of two radius lists, with index maps back into the union.
struct RadiusUnion {
    std::vector<double> radii;
    std::vector<std::size_t> r_index, rp_index;
};
RadiusUnion radius_union(const std::vector<double>& r_grid, const std::vector<double>& rp_grid);

// k rule on (0, K]: geometric panels (ratio 1/2) from k_top down to k_floor plus
// [0, k_floor], then uniform panels of width <= panel_width up to K.
// low_panels holds the node ranges of the geometric panels, innermost first.
struct KRule {
    QuadRule rule;
    std::vector<std::pair<std::size_t, std::size_t>> low_panels;
};
KRule open_k_rule(double K, double panel_width, int order, double k_floor);

// Default panel width for an integrand oscillating like sin(k s), s <= s_max.
double oscillation_panel(double s_max);

// Leading large-k term of u(k,r) u(k,r') - (2/pi) j(kr) j(kr') and its integral over k > K.
double open_asymptotic_tail(const PotentialSpec& spec, double Vr, double Vrp, double r, double rp, double K);

// Normalized Fourier-Bessel state j(kappa r) sqrt(2 / (R j'(kappa R)^2)).
double fourier_bessel_state(double ell, double kappa, double R, double r);

}  // namespace complab::detail
