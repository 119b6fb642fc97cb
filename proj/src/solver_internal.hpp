#pragma once

#include <vector>

#include "complab/solver.hpp"

namespace complab::detail {

// Outer matching radius for the two-sided bound-state shot at energy E < 0.
double bound_matching_radius(const PotentialSpec& spec, double E, double R);

// Scale-free Wronskian mismatch between the outward solution and the inward
// one that vanishes at R, both taken at r_m.
double bound_mismatch(const PotentialSpec& spec, double E, double R, double r_m,
                      const SolverOptions& opts);

// Two-sided solution at energy E: outward on [0, r_m], inward from R, joined
// on value and slope at r_m. Positive leading coefficient at the origin.
Shot shoot_two_sided(const PotentialSpec& spec, double E, double R, double r_m,
                     const std::vector<double>& radii, const SolverOptions& opts);

// Coulomb (or Riccati-Bessel for Vc = 0) phase arg(G + iF) at rho, and its
// unwrapped advance between two radii.
double coulomb_phase(double ell, double eta, double rho);
double coulomb_phase_advance(double ell, double eta, double rho0, double rho1);

}  // namespace complab::detail
