#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "complab/fit.hpp"
#include "complab/potential.hpp"
#include "complab/solver.hpp"

namespace complab {

struct SpectrumMismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct AbelDomainError : std::domain_error {
    using std::domain_error::domain_error;
};

enum class KernelKind { BoxSubtracted, OpenSubtracted, CoulombDelta };
std::string to_string(KernelKind kind);

struct KernelField {
    std::vector<double> r_grid, rp_grid;
    std::vector<double> values;  // row-major, r index first
    double truncation = 0;       // M for box kernels, K for open ones
    bool accelerated = false;
    KernelKind kind = KernelKind::BoxSubtracted;

    // Box: bound on the dropped tail of the plain series, and |exact - asymptotic| at m = M.
    double truncation_estimate = 0;
    double splice_residual = 0;
    // Open: analytic contribution of k > K (included in values) and the low-k flag.
    double tail_max = 0;
    bool low_k_converged = true;

    double at(std::size_t i, std::size_t j) const { return values[i * rp_grid.size() + j]; }
    double max_abs() const;
    // max |S(r_i, r_j) - S(r_j, r_i)|; needs r_grid == rp_grid.
    double symmetry_defect() const;
};

// 21 x 21 style uniform grid over [0.1 R0, 0.9 R].
std::vector<double> default_kernel_grid(const PotentialSpec& spec, double R, int n = 21);

struct AbelResult {
    double direct = 0;       // sum_{m<=M} f sin(m x + a) / m
    double accelerated = 0;  // Abel-transformed form, limit estimate
};
// f is the constant amplitude. At x = 0 or 2 pi the transformed form needs f'(x),
// passed as endpoint_slope; without it the call throws AbelDomainError.
AbelResult abel_sum(double f, double x, double a, long M, std::optional<double> endpoint_slope = std::nullopt);

// Closed-form value of sum_{m>M} sin(m x + a) / m.
double sine_series_tail(double x, double a, long M);

struct BoxKernelOptions {
    bool include_bound = true;
    SolverOptions solver;
};

KernelField kernel_box(const PotentialSpec& spec, double R, const std::vector<double>& r_grid,
                       const std::vector<double>& rp_grid, int M, bool accelerated,
                       const BoxKernelOptions& opts = {});

struct OpenKernelOptions {
    double k_floor = 1e-4;       // geometric low-k refinement stops here
    double panel_width = 0.0;    // 0: four periods of the fastest oscillation
    double bound_box_R = 0.0;    // box used for open-interval bound states; 0: automatic
    SolverOptions solver;
};

KernelField kernel_open(const PotentialSpec& spec, const std::vector<double>& r_grid,
                        const std::vector<double>& rp_grid, double K_cutoff, int quadrature_order, int N_bound,
                        const OpenKernelOptions& opts = {});

// Open-interval bound states (normalized, positive near the origin) at the given radii.
struct OpenBound {
    std::vector<double> kappa;
    std::vector<std::vector<double>> values;  // [state][radius]
};
OpenBound open_bound_states(const PotentialSpec& spec, int count, const std::vector<double>& radii, double R_box = 0.0,
                            const SolverOptions& opts = {});

// Bound-term sweep of the open kernel: max |S| over the grid after adding n bound terms.
struct BoundSweep {
    std::vector<int> n_bound;
    std::vector<double> max_abs;
    bool monotone = false;       // non-increasing until the plateau
    double plateau = 0;          // final value
};
BoundSweep open_kernel_bound_sweep(const PotentialSpec& spec, const std::vector<double>& r_grid, double K_cutoff,
                                   int quadrature_order, int N_bound_max, const OpenKernelOptions& opts = {});

struct TargetFunction {
    std::string description;
    std::function<double(double)> f;
    // Optional vectorized evaluation, used for the quadrature nodes when set.
    std::function<std::vector<double>(const std::vector<double>&)> batch;
    std::vector<double> jumps;  // declared discontinuities
    double support_hi = 0;      // 0: the whole box
};

struct ExpansionResult {
    std::string target;
    std::vector<double> bound_coeffs;
    std::vector<double> scattering_coeffs;  // against unit-norm box states
    std::vector<double> momenta;
    std::vector<double> r_eval;
    std::vector<double> reconstruction;     // partial sum at r_eval
    std::vector<double> accelerated;        // mean of the partial sums over the upper half of the terms
    std::vector<double> midpoint_reference; // (f(r+) + f(r-)) / 2
    double norm2 = 0;                       // integral of f^2
    double parseval_defect = 0;             // |norm2 - sum c^2|
};

ExpansionResult expand_function(const PotentialSpec& spec, double R, const TargetFunction& target, int M,
                                const std::vector<double>& r_eval, const SolverOptions& opts = {});

// Open-interval expansion: bound coefficients plus the Fourier-type transform over k in (0, K].
ExpansionResult expand_function_open(const PotentialSpec& spec, const TargetFunction& target, double K_cutoff,
                                     int quadrature_order, int N_bound, const std::vector<double>& r_eval,
                                     const OpenKernelOptions& opts = {});

// (2/pi) int_0^K F(kr) F(kr') dk with eta = Vc / 2k per node.
double coulomb_delta_kernel(double ell, double Vc, double r, double rp, double K);
// Vc = 0, l = 0 closed form.
double coulomb_delta_kernel_free(double r, double rp, double K);
// int J(K; r, r') g(r') dr' over [a, b].
double coulomb_delta_smear(double ell, double Vc, const std::function<double(double)>& g, double a, double b,
                           double r, double K);
// Angular frequency of the oscillation of J(K; r, r + s) in s, from the periodogram peak.
double coulomb_delta_frequency(double ell, double Vc, double r, double K, double s_min, double s_max,
                               int samples = 512);

struct RiemannStudy {
    std::vector<double> R;
    std::vector<double> defect;   // |sum - integral| at fixed (r, r'), cut at K
    FitReport rest;               // K sweep of the series rest, slope <= -1
    bool decreasing = false;
};
RiemannStudy riemann_vs_integral_study(const PotentialSpec& spec, const std::vector<double>& R_sequence, double K,
                                       double r, double rp, const std::vector<double>& K_sweep = {},
                                       double R_sweep = 0.0, double tolerance = 0.0);

struct NormSeriesStudy {
    std::vector<double> R;
    std::vector<double> series;   // |S^{eps+}(r, r')|
    std::vector<double> M_N;      // max k_m^2 |N^2 - 1| over k_m >= k_eps
    std::vector<double> M_B;      // max kappa_m^2 |B^2 - 2/pi|
    bool series_decreasing = false;
    std::vector<double> halving_ratio;  // M_N(R_i) / M_N(R_{i-1})
    FitReport M_N_fit;                  // slope -1 in R
    bool halves(double tol = 0.3) const;
};
NormSeriesStudy norm_defect_series_study(const PotentialSpec& spec, const std::vector<double>& R_sequence,
                                         double k_eps, double r, double rp, double k_cap = 30.0);

}  // namespace complab
