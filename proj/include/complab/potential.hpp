#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace complab {

struct PotentialError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Radial Hamiltonian: centrifugal term, local part on [0, R0] continued by an
// exact Coulomb tail Vc/r, and an optional symmetric non-local kernel on [0, R0]^2.
struct PotentialSpec {
    double ell = 0;
    double Vc = 0;
    double R0 = 1;
    std::function<double(double)> local;              // consulted only on [0, R0]
    std::function<double(double, double)> nonlocal;   // empty when absent
    std::string family_tag;

    double origin_coulomb = 0;         // c in a c/r singularity of `local` at the origin
    std::vector<double> breakpoints;   // radii in (0, R0) where `local` jumps
    bool local_is_zero = false;
    int nystrom_nodes = 64;

    bool has_nonlocal() const { return static_cast<bool>(nonlocal); }
    bool is_free() const { return local_is_zero && !has_nonlocal() && Vc == 0.0; }
};

PotentialSpec free_particle(double ell = 0, double R0 = 1);
PotentialSpec square_well(double depth, double R0, double Vc = 0, double ell = 0);
PotentialSpec woods_saxon(double depth, double radius, double diffuseness, double R0, double Vc = 0,
                          double ell = 0);
PotentialSpec pure_coulomb(double Vc, double ell = 0, double R0 = 1);
// strength * exp(-((r - r')/width)^2) * g(r) g(r'), g(r) = r^(l+1) (R0 - r) / R0^(l+2)
PotentialSpec gaussian_nonlocal(double strength, double width, double R0, double ell = 0, double Vc = 0);
// Sum of specs sharing ell, Vc and R0.
PotentialSpec composite(const std::vector<PotentialSpec>& parts);

double eval_local(const PotentialSpec& spec, double r);
double eval_nonlocal(const PotentialSpec& spec, double r, double rp);

// Primitive of v from the origin, with the c/r origin singularity (if any) subtracted.
double integrated_potential(const PotentialSpec& spec, double r);

// sqrt(2 max v+) + 1 over [0, R0], the large-momentum guard.
double k_min(const PotentialSpec& spec);
double max_positive_local(const PotentialSpec& spec);

struct ValidationCheck {
    std::string name;
    bool passed = true;
    double residual = 0;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool ok() const;
    const ValidationCheck* find(const std::string& name) const;
};

ValidationReport validate(const PotentialSpec& spec);

}  // namespace complab
