#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "complab/potential.hpp"

namespace complab {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ResolutionError : SolverError {
    using SolverError::SolverError;
};
struct ConditioningError : SolverError {
    using SolverError::SolverError;
};
struct MissedRootError : SolverError {
    using SolverError::SolverError;
};
struct ZeroNormError : SolverError {
    using SolverError::SolverError;
};

struct SolverOptions {
    double rtol = 1e-12;
    // Propagate r > R0 with the ODE instead of Coulomb/Riccati functions.
    bool numeric_exterior = false;
    double root_rtol = 1e-13;
    // Scan step as a fraction of pi/R.
    double scan_fraction = 0.25;
};

struct RadialGrid {
    double R = 0;
    int n_points = 0;  // intervals; points has n_points + 1 entries
    double spacing = 0;
    std::vector<double> points;

    static RadialGrid uniform(double R, int n_points);
};

struct RadialFunction {
    RadialGrid grid;
    std::vector<double> samples;
    double k2 = 0;
    // Exact value of the integral of samples^2 over [0, R] when known (< 0 otherwise).
    double norm2 = -1;

    // Local cubic interpolation between grid samples.
    double at(double r) const;
    RadialFunction scaled(double c) const;
};

// Raw regular solution, leading coefficient 1 at the origin, carried as
// mantissas times exp(log_scale).
struct Shot {
    double k2 = 0;
    double R = 0;
    double log_scale = 0;
    std::vector<double> values;  // at the requested radii
    double uR = 0, upR = 0;
    double norm2 = 0;  // integral of u^2 over [0, R], in units of exp(2 log_scale)
    int nodes = 0;     // strict sign changes on (0, R)
    // For k2 > 0: u = A F(kr) + B G(kr) on r >= R0, same units as values.
    bool has_exterior = false;
    double A = 0, B = 0;
};

struct ShotNeeds {
    bool norm = true;
    bool nodes = true;
    // Exterior coefficients A, B. Without them a shot that ends under the
    // Coulomb barrier is marched numerically instead.
    bool exterior = true;
};

Shot shoot(const PotentialSpec& spec, double k2, double R, const std::vector<double>& radii,
           ShotNeeds needs = {}, const SolverOptions& opts = {});

RadialFunction integrate_regular(const PotentialSpec& spec, double k2, const RadialGrid& grid,
                                 const SolverOptions& opts = {});

int count_nodes(const RadialFunction& wave);

struct BoxState {
    double momentum = 0;  // k, or kappa for bound states
    bool bound = false;
    double energy = 0;    // k^2 or -kappa^2
    int nodes = 0;
    double norm_constant = 1;  // multiplies the raw regular solution (sign included)
    double log_norm_constant = 0;
    double spacing = 0;        // k_m - k_{m-1}; 0 for bound states
    double norm2 = 0;          // integral of the current values squared over [0, R]
    std::vector<double> sampled;  // values at BoxSpectrum::radii
    RadialFunction wave;          // optional dense samples
    // Scattering matching data.
    double phase_shift = 0;
    double N_k = 0;
    std::complex<double> S_plus{0, 0}, S_minus{0, 0};
    double ext_A = 0, ext_B = 0;  // u = ext_A F + ext_B G beyond R0, current scale
};

struct BoxSpectrum {
    const PotentialSpec* spec = nullptr;
    double R = 0;
    double k_cutoff = 0;
    std::vector<double> radii;
    std::vector<BoxState> bound;
    std::vector<BoxState> scattering;
};

struct SpectrumRequest {
    double R = 0;
    double k_max = 0;
    std::vector<double> radii;  // where to sample every state
    bool include_bound = true;
    bool match = true;          // fill N_k, phase shift and S+-
    SolverOptions options;
};

// Scattering momenta in (0, k_max] with u(k, R) = 0.
std::vector<double> find_box_momenta(const PotentialSpec& spec, double R, double k_max,
                                     const SolverOptions& opts = {});
// Bound-state kappas (energy -kappa^2 < 0) ordered by node count.
std::vector<double> find_box_kappas(const PotentialSpec& spec, double R, const SolverOptions& opts = {});

BoxSpectrum find_box_eigenmomenta(const PotentialSpec& spec, double R, double k_max,
                                  const std::vector<double>& radii = {}, const SolverOptions& opts = {});
std::vector<BoxState> find_box_bound_states(const PotentialSpec& spec, double R,
                                            const std::vector<double>& radii = {},
                                            const SolverOptions& opts = {});
BoxSpectrum solve_box_spectrum(const PotentialSpec& spec, const SpectrumRequest& req);

// Builds a normalized state at an eigenvalue found by the search routines.
BoxState make_box_state(const PotentialSpec& spec, double R, double energy, double spacing,
                        const std::vector<double>& radii, const SolverOptions& opts = {});
// Dense samples of a state on grid (same normalization and sign as the state).
RadialFunction materialize(const PotentialSpec& spec, const BoxState& state, const RadialGrid& grid,
                           const SolverOptions& opts = {});

BoxState scale_state(const BoxState& state, double c);
BoxState normalize_box(const BoxState& state, double spacing);

struct Matching {
    double N_k = 0;
    double phase_shift = 0;  // in [0, 2pi)
    std::complex<double> S_plus, S_minus;
    double max_residual = 0;  // relative, over the check set
};
Matching match_asymptotics(const BoxState& state, const PotentialSpec& spec, double R);

// Open-interval scattering state with unit Dirac normalization.
struct OpenState {
    double k = 0;
    double phase_shift = 0;
    double amplitude = 0;       // of the raw solution, so that u_raw = amplitude (cos d F + sin d G)
    double log_amplitude = 0;   // amplitude = exp(log_amplitude) * mantissa scale
    std::vector<double> values; // Dirac-normalized, at the requested radii
};
OpenState open_state(const PotentialSpec& spec, double k, const std::vector<double>& radii,
                     const SolverOptions& opts = {});

// Normalized bound state extended to the open interval limit by a large box.
struct ConvergenceReport {
    std::vector<double> R_sequence;
    std::vector<double> values;
    std::vector<double> defects;  // |v_i - v_{i-1}|
    double extrapolated = 0;
    double defect_estimate = 0;
    bool converging = false;
};
ConvergenceReport open_limit_extrapolate(const std::function<double(double)>& probe,
                                         const std::vector<double>& R_sequence);

struct ZeroEnergyDiagnosis {
    bool grows = false;
    bool marginal = false;
    double growth_ratio = 0;  // |u0(R)| / |u0(R/2)|
    double log_u_far = 0;
};
ZeroEnergyDiagnosis zero_energy_probe(const PotentialSpec& spec, double R_large,
                                      const SolverOptions& opts = {});

}  // namespace complab
