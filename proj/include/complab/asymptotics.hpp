#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "complab/fit.hpp"
#include "complab/potential.hpp"
#include "complab/solver.hpp"

namespace complab {

struct TurningPointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InsufficientLevelsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bessel: phase built on v. Coulomb: phase built on v - Vc/r, used with
// Coulomb functions; needs the origin singularity to equal the tail.
enum class WkbVariant { Bessel, Coulomb };

// Local momentum sqrt(k^2 - v) and its primitive from the origin, tabulated
// once on [0, r_max]. Throws TurningPointError if k^2 - v <= 0 anywhere.
class WkbFrame {
public:
    WkbFrame(const PotentialSpec& spec, double k, WkbVariant variant, double r_max);

    double lambda(double r) const;
    double Lambda(double r) const;
    // Primitive of the potential entering the two-term form (v or v - Vc/r).
    double primitive(double r) const;
    double k() const { return k_; }
    WkbVariant variant() const { return variant_; }

private:
    double v_eff(double r) const;
    double panel_integral(double a, double b) const;

    const PotentialSpec* spec_;
    double k_;
    WkbVariant variant_;
    double r_max_;
    std::vector<double> edges_, cumulative_;
};

inline constexpr double kSqrt2OverPi = 0.79788456080286535588;

// C j(kr) - C (V(r)/2k) j'(kr), V the primitive of v.
double wkb_bessel(const PotentialSpec& spec, double k, double r, double C = kSqrt2OverPi);
std::vector<double> wkb_bessel(const PotentialSpec& spec, double k, const std::vector<double>& radii,
                               double C = kSqrt2OverPi);

// C j(Lambda(r)) (Bessel) or C F_{l,eta}(Lambda0(r)) (Coulomb).
double wkb_phase_form(const PotentialSpec& spec, double k, double r, WkbVariant variant,
                      double C = kSqrt2OverPi);
std::vector<double> wkb_phase_form(const PotentialSpec& spec, double k, const std::vector<double>& radii,
                                   WkbVariant variant, double C = kSqrt2OverPi);

// Fitted amplitude and sup defect of the regular solution against a model.
struct WkbDefect {
    double k = 0;
    double amplitude = 0;  // least-squares C in u ~ C model
    double sup_defect = 0; // sup |u/C - model|
};
enum class WkbModel { TwoTerm, PhaseBessel, PhaseCoulomb };
WkbDefect wkb_defect(const PotentialSpec& spec, double k, double r_max, WkbModel model = WkbModel::TwoTerm,
                     int samples = 0);

// Sup defect of the two-term form over [0, r_max] against the solver, fitted in k.
FitReport wkb_order_study(const PotentialSpec& spec, const std::vector<double>& ks, double r_max,
                          WkbModel model = WkbModel::TwoTerm, double tolerance = 0.25);
// Sup over r of the change in the normalized solution caused by the non-local part.
// One-sided: passes when the slope is at most predicted + tolerance.
FitReport nonlocal_invisibility_study(const PotentialSpec& local_only, const PotentialSpec& with_nonlocal,
                                      const std::vector<double>& ks, double r_max, double tolerance = 0.25);

// Default momentum ladder k_min * {4, 4 sqrt2, 8, 8 sqrt2, 16}.
std::vector<double> wkb_ladder(const PotentialSpec& spec);

// Predicted k_m for the m-th scattering state (m - 1 interior nodes).
// Uses the Coulomb-origin form when spec.origin_coulomb != 0.
double eigenmomentum_expansion(int m, double R, const PotentialSpec& spec);
// Same without the log(2 k R) term, for comparison on Coulomb-origin potentials.
double eigenmomentum_expansion_logfree(int m, double R, const PotentialSpec& spec);
// Predicted m-th root of j_l(kappa R).
double bessel_eigenmomentum(int m, double R, double ell);

// Exact B for the m-th Bessel box state from the closed-form norm integral.
double bessel_norm_constant(double ell, double R, int m);

// Envelope of an oscillating defect sequence: maximum over consecutive blocks,
// paired with the index where the maximum occurs.
void block_envelope(const std::vector<double>& m, const std::vector<double>& defect, int block,
                    std::vector<double>& m_out, std::vector<double>& d_out);

struct EigenmomentumStudy {
    std::vector<int> m;
    std::vector<double> k_solver, k_predicted;
    FitReport remainder;  // envelope fit, slope -2
};
EigenmomentumStudy eigenmomentum_remainder_study(const PotentialSpec& spec, double R, int m_lo, int m_hi,
                                                 int block = 10, double tolerance = 0.15);

struct NormConstantStudy {
    FitReport C;  // |C_{k_m} - sqrt(2/pi)|
    FitReport B;  // |B_{kappa_m} - sqrt(2/pi)|
};
// C uses spec; B uses the Bessel problem at angular momentum bessel_ell.
NormConstantStudy norm_constant_study(const PotentialSpec& spec, double R, int m_lo, int m_hi,
                                      double bessel_ell = 3, int block = 10, double tolerance = 0.2);

struct LargeRStudy {
    std::vector<double> R;
    std::vector<double> spacing_defect;  // sup over the window of R |dk - pi/R|
    std::vector<double> norm_defect;     // sup over the window of |N_k - 1|
    FitReport spacing, norm;
};
LargeRStudy spacing_and_norm_large_R(const PotentialSpec& spec, double k_fixed, const std::vector<double>& R_sequence,
                                     double window = 0.25);

struct LowKBound {
    std::vector<double> R;
    std::vector<double> max_norm2;  // max N^2 over k_m < k_eps
    std::vector<int> count;
    double relative_change = 0;     // |last / previous - 1|
    bool stable(double tol = 0.2) const { return relative_change <= tol; }
};
LowKBound attractive_low_k_bound(const PotentialSpec& spec, const std::vector<double>& R_sequence, double k_eps);

struct GamowStudy {
    std::vector<double> k;
    std::vector<double> log_D;      // log |u(k, r_probe) / u0(r_probe)|, Dirac normalization
    std::vector<double> C_k;        // coefficient of F in the Dirac-normalized state
    std::vector<double> ratio;      // D / (C eta^-1/2 e^-pi eta), or D / C for Vc = 0
    double spread = 0;              // max |ratio_i / ratio_{i-1} - 1| over the sequence
    FitReport exponent;             // Vc = 0: log D/C against log k, slope l + 1
};
GamowStudy repulsive_low_k_suppression(const PotentialSpec& spec, const std::vector<double>& ks, double r_probe,
                                       double tolerance = 0.05);

struct BoundScaling {
    std::vector<int> n;
    std::vector<double> kappa, u_at_r;
    double quantum_defect = 0;  // mu in 1/kappa = a (n + mu)
    FitReport kappa_fit;        // slope -1 against n + mu
    FitReport u_fit;            // slope -3/2 against n + mu
};
BoundScaling bound_scaling_study(const PotentialSpec& spec, double R, int n_lo, int n_hi, double r_fixed = 1.0,
                                 double kappa_tol = 0.05, double u_tol = 0.1);

// Ratio of the sin^2-weighted integral of 1/lambda to half the plain integral,
// evaluated at each r_f.
struct NormEquivalent {
    std::vector<double> r_f, ratio;
};
NormEquivalent norm_equivalent_ratio(const std::function<double(double)>& lambda, double r_i,
                                     const std::vector<double>& r_f_sequence, double delta);
// Attractive-tail scattering state at momentum k: phase taken from the solver at r_i.
NormEquivalent norm_equivalent_scattering(const PotentialSpec& spec, double k, double r_i,
                                          const std::vector<double>& r_f_sequence);
// Bound state with `nodes` nodes; r_f capped at half the Coulomb turning point.
NormEquivalent norm_equivalent_bound(const PotentialSpec& spec, int nodes, double R, double r_d,
                                     const std::vector<double>& r_f_sequence);

double repulsive_turning_point(const PotentialSpec& spec, double k);

}  // namespace complab
