#include <algorithm>
#include <cmath>

#include "complab/asymptotics.hpp"
#include "complab/completeness.hpp"
#include "complab/parallel.hpp"
#include "complab/quadrature.hpp"
#include "complab/specfun.hpp"
#include "completeness_internal.hpp"

namespace complab {

namespace {

void check_grid(const std::vector<double>& g, const char* what)
{
    if (g.empty()) throw std::invalid_argument(std::string(what) + ": empty grid");
    for (double r : g)
        if (!(r > 0)) throw std::invalid_argument(std::string(what) + ": radii must be positive");
}

double max_of(const std::vector<double>& v)
{
    double m = 0;
    for (double x : v) m = std::max(m, x);
    return m;
}

}  // namespace

OpenBound open_bound_states(const PotentialSpec& spec, int count, const std::vector<double>& radii, double R_box,
                            const SolverOptions& opts)
{
    OpenBound ob;
    if (count <= 0) return ob;
    double R = R_box > 0 ? R_box : 40.0 * spec.R0;
    std::vector<double> kappas;
    for (int pass = 0; pass < 6; ++pass) {
        kappas = find_box_kappas(spec, R, opts);
        if (static_cast<int>(kappas.size()) > count) kappas.resize(static_cast<std::size_t>(count));
        if (R_box > 0 || kappas.empty()) break;
        // The shallowest state needs its outer turning point plus ~30 decay lengths inside the box.
        const double kap = kappas.back();
        const double r_turn = spec.Vc < 0 ? -spec.Vc / (kap * kap) : spec.R0;
        const double need = 1.2 * (std::max(r_turn, spec.R0) + 30.0 / kap);
        const bool short_of_count = static_cast<int>(kappas.size()) < count && spec.Vc < 0;
        if (need <= R && !short_of_count) break;
        R = std::max(need, short_of_count ? 2.0 * R : R);
    }
    for (double r : radii)
        if (r > R) throw std::invalid_argument("open_bound_states: radius beyond the bound-state box");
    ob.kappa = kappas;
    ob.values.resize(kappas.size());
    parallel_for(kappas.size(), [&](std::size_t n) {
        ob.values[n] = make_box_state(spec, R, -kappas[n] * kappas[n], 0.0, radii, opts).sampled;
    });
    return ob;
}

namespace {

struct OpenContinuum {
    detail::RadiusUnion U;
    std::vector<double> values;  // continuum part plus tail, row-major over the requested grids
    double tail_max = 0;
    bool low_k_converged = true;
};

OpenContinuum open_continuum(const PotentialSpec& spec, const std::vector<double>& r_grid,
                             const std::vector<double>& rp_grid, double K, int order, const OpenKernelOptions& opts)
{
    OpenContinuum oc;
    oc.U = detail::radius_union(r_grid, rp_grid);
    const auto& radii = oc.U.radii;
    const std::size_t nr = radii.size();
    const double width = opts.panel_width > 0 ? opts.panel_width
                                              : detail::oscillation_panel(max_of(r_grid) + max_of(rp_grid));
    const detail::KRule kr = detail::open_k_rule(K, width, order, opts.k_floor);
    const std::size_t nk = kr.rule.nodes.size();

    // Per-node difference u u' - (2/pi) j j' needs the states only; store them.
    std::vector<std::vector<double>> u(nk), j(nk);
    parallel_for(nk, [&](std::size_t i) {
        const double k = kr.rule.nodes[i];
        u[i] = open_state(spec, k, radii, opts.solver).values;
        j[i].resize(nr);
        for (std::size_t a = 0; a < nr; ++a) j[i][a] = kSqrt2OverPi * riccati_bessel(spec.ell, k * radii[a]).f;
    });

    std::vector<double> Vu(nr);
    for (std::size_t a = 0; a < nr; ++a) Vu[a] = integrated_potential(spec, radii[a]);

    const std::size_t nrr = r_grid.size(), nrp = rp_grid.size();
    oc.values.assign(nrr * nrp, 0.0);
    std::vector<double> tails(nrr, 0.0);
    std::vector<char> low_ok(nrr, 1);
    const auto inner = kr.low_panels.front();
    const auto next = kr.low_panels.size() > 1 ? kr.low_panels[1] : inner;
    parallel_for(nrr, [&](std::size_t a) {
        const std::size_t ia = oc.U.r_index[a];
        for (std::size_t b = 0; b < nrp; ++b) {
            const std::size_t ib = oc.U.rp_index[b];
            double s = 0, c = 0;
            auto integrand = [&](std::size_t i) { return u[i][ia] * u[i][ib] - j[i][ia] * j[i][ib]; };
            for (std::size_t i = 0; i < nk; ++i) {
                const double t = kr.rule.weights[i] * integrand(i) - c;
                const double n = s + t;
                c = (n - s) - t;
                s = n;
            }
            // Bounded states near k = 0: the integrand must not grow toward the innermost panel.
            double m_in = 0, m_next = 0;
            for (std::size_t i = inner.first; i < inner.second; ++i) m_in = std::max(m_in, std::abs(integrand(i)));
            for (std::size_t i = next.first; i < next.second; ++i) m_next = std::max(m_next, std::abs(integrand(i)));
            if (m_in > 4.0 * m_next && m_in > 1e-6) low_ok[a] = 0;
            const double tail = detail::open_asymptotic_tail(spec, Vu[ia], Vu[ib], radii[ia], radii[ib], K);
            tails[a] = std::max(tails[a], std::abs(tail));
            oc.values[a * nrp + b] = s + tail;
        }
    });
    oc.tail_max = max_of(tails);
    oc.low_k_converged = std::all_of(low_ok.begin(), low_ok.end(), [](char c) { return c != 0; });
    return oc;
}

}  // namespace

KernelField kernel_open(const PotentialSpec& spec, const std::vector<double>& r_grid,
                        const std::vector<double>& rp_grid, double K_cutoff, int quadrature_order, int N_bound,
                        const OpenKernelOptions& opts)
{
    check_grid(r_grid, "kernel_open");
    check_grid(rp_grid, "kernel_open");
    if (!(K_cutoff > 0)) throw std::invalid_argument("kernel_open: K must be positive");
    if (quadrature_order < 2) throw std::invalid_argument("kernel_open: quadrature order must be at least 2");

    KernelField kf;
    kf.r_grid = r_grid;
    kf.rp_grid = rp_grid;
    kf.kind = KernelKind::OpenSubtracted;
    kf.truncation = K_cutoff;
    if (spec.is_free()) {
        kf.values.assign(r_grid.size() * rp_grid.size(), 0.0);
        return kf;
    }
    OpenContinuum oc = open_continuum(spec, r_grid, rp_grid, K_cutoff, quadrature_order, opts);
    kf.values = std::move(oc.values);
    kf.tail_max = oc.tail_max;
    kf.low_k_converged = oc.low_k_converged;

    const OpenBound ob = open_bound_states(spec, N_bound, oc.U.radii, opts.bound_box_R, opts.solver);
    for (std::size_t a = 0; a < r_grid.size(); ++a)
        for (std::size_t b = 0; b < rp_grid.size(); ++b)
            for (const auto& v : ob.values) kf.values[a * rp_grid.size() + b] += v[oc.U.r_index[a]] * v[oc.U.rp_index[b]];
    return kf;
}

BoundSweep open_kernel_bound_sweep(const PotentialSpec& spec, const std::vector<double>& r_grid, double K_cutoff,
                                   int quadrature_order, int N_bound_max, const OpenKernelOptions& opts)
{
    check_grid(r_grid, "open_kernel_bound_sweep");
    OpenContinuum oc = open_continuum(spec, r_grid, r_grid, K_cutoff, quadrature_order, opts);
    const OpenBound ob = open_bound_states(spec, N_bound_max, oc.U.radii, opts.bound_box_R, opts.solver);
    std::vector<double> vals = oc.values;
    const std::size_t n = r_grid.size();
    auto max_abs = [&] {
        double m = 0;
        for (double v : vals) m = std::max(m, std::abs(v));
        return m;
    };
    BoundSweep sw;
    sw.n_bound.push_back(0);
    sw.max_abs.push_back(max_abs());
    for (std::size_t s = 0; s < ob.values.size(); ++s) {
        const auto& v = ob.values[s];
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) vals[a * n + b] += v[oc.U.r_index[a]] * v[oc.U.r_index[b]];
        sw.n_bound.push_back(static_cast<int>(s + 1));
        sw.max_abs.push_back(max_abs());
    }
    sw.plateau = sw.max_abs.back();
    // Non-increasing until the value first comes within 10% of the plateau.
    sw.monotone = true;
    for (std::size_t i = 1; i < sw.max_abs.size(); ++i) {
        if (sw.max_abs[i - 1] <= 1.1 * sw.plateau) break;
        if (sw.max_abs[i] > sw.max_abs[i - 1]) sw.monotone = false;
    }
    return sw;
}

namespace {

// Upper estimate of log|F(rho)| under the Coulomb barrier.
double log_gamow(double eta, double rho)
{
    if (eta <= 0) return 0.0;
    return -M_PI * eta + std::sqrt(8.0 * eta * std::min(rho, 2.0 * eta)) + 5.0;
}

// Contributions below exp(-50) are dropped.
constexpr double kLogNegligible = -50.0;

double coulomb_regular(double ell, double Vc, double k, double r)
{
    if (Vc == 0.0) return riccati_bessel(ell, k * r).f;
    const double eta = Vc / (2.0 * k);
    const ScaledWave a = coulomb_wave_scaled(CoulombParams{ell, eta}, k * r);
    if (a.log_scale < 2.0 * kLogNegligible) return 0.0;
    return a.w.f * std::exp(a.log_scale);
}

// Lowest k worth integrating: below it F(k r1) F(k r2) < exp(-50).
double gamow_floor(double Vc, double r1, double r2, double K)
{
    if (Vc <= 0) return 0.0;
    auto est = [&](double k) { return log_gamow(Vc / (2 * k), k * r1) + log_gamow(Vc / (2 * k), k * r2); };
    if (est(K) < kLogNegligible) return K;
    double lo = 1e-12 * K, hi = K;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * K; ++it) {
        const double mid = 0.5 * (lo + hi);
        (est(mid) < kLogNegligible ? lo : hi) = mid;
    }
    return lo;
}

// k rule on [k_lo, K]; from zero it refines geometrically toward the origin.
QuadRule delta_k_rule(double k_lo, double K, double panel_width)
{
    if (k_lo <= 0) return detail::open_k_rule(K, panel_width, 32, 1e-6).rule;
    const int panels = std::max(1, static_cast<int>(std::ceil((K - k_lo) / panel_width)));
    return composite_gauss(k_lo, K, panels, 32);
}

double kahan_sum(const std::vector<double>& t)
{
    double s = 0, c = 0;
    for (double x : t) {
        const double y = x - c;
        const double n = s + y;
        c = (n - s) - y;
        s = n;
    }
    return s;
}

void check_delta_args(double Vc, double r, double rp, double K)
{
    if (!(r > 0 && rp > 0)) throw std::invalid_argument("coulomb_delta_kernel: radii must be positive");
    if (!(K > 0)) throw std::invalid_argument("coulomb_delta_kernel: K must be positive");
    if (Vc < 0) throw std::invalid_argument("coulomb_delta_kernel: Vc must be non-negative");
}

}  // namespace

double coulomb_delta_kernel(double ell, double Vc, double r, double rp, double K)
{
    check_delta_args(Vc, r, rp, K);
    const double k_lo = gamow_floor(Vc, r, rp, K);
    if (k_lo >= K) return 0.0;
    const QuadRule q = delta_k_rule(k_lo, K, detail::oscillation_panel(r + rp));
    std::vector<double> t(q.nodes.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double k = q.nodes[i];
        t[i] = q.weights[i] * coulomb_regular(ell, Vc, k, r) * coulomb_regular(ell, Vc, k, rp);
    }
    return 2.0 / M_PI * kahan_sum(t);
}

double coulomb_delta_kernel_free(double r, double rp, double K)
{
    const double d = r - rp, s = r + rp;
    const double minus = d == 0.0 ? K : std::sin(K * d) / d;
    return (minus - std::sin(K * s) / s) / M_PI;
}

double coulomb_delta_smear(double ell, double Vc, const std::function<double(double)>& g, double a, double b,
                           double r, double K)
{
    check_delta_args(Vc, r, a, K);
    if (!(b > a)) throw std::invalid_argument("coulomb_delta_smear: empty support");
    // Swap the order: (2/pi) int_0^K F(k r) [int g(r') F(k r') dr'] dk.
    const double k_lo = gamow_floor(Vc, r, b, K);
    if (k_lo >= K) return 0.0;
    const QuadRule q = delta_k_rule(k_lo, K, detail::oscillation_panel(r + b));
    std::vector<double> t(q.nodes.size());
    parallel_for(t.size(), [&](std::size_t i) {
        const double k = q.nodes[i];
        const double fr = coulomb_regular(ell, Vc, k, r);
        if (fr == 0.0) {
            t[i] = 0.0;
            return;
        }
        // Two Gauss panels of order 16 per half period of F(k r').
        const int panels = std::max(2, static_cast<int>(std::ceil(2.0 * k * (b - a) / M_PI)));
        const QuadRule rq = composite_gauss(a, b, panels, 16);
        double inner = 0;
        for (std::size_t n = 0; n < rq.nodes.size(); ++n) {
            const double gv = g(rq.nodes[n]);
            if (gv != 0.0) inner += rq.weights[n] * gv * coulomb_regular(ell, Vc, k, rq.nodes[n]);
        }
        t[i] = q.weights[i] * fr * inner;
    });
    return 2.0 / M_PI * kahan_sum(t);
}

double coulomb_delta_frequency(double ell, double Vc, double r, double K, double s_min, double s_max, int samples)
{
    if (!(s_max > s_min && s_min > 0)) throw std::invalid_argument("coulomb_delta_frequency: need 0 < s_min < s_max");
    if (samples < 16) throw std::invalid_argument("coulomb_delta_frequency: too few samples");
    const std::size_t n = static_cast<std::size_t>(samples);
    const double h = (s_max - s_min) / static_cast<double>(n - 1);
    std::vector<double> s(n), y(n);
    parallel_for(n, [&](std::size_t i) {
        s[i] = s_min + h * static_cast<double>(i);
        // Undo the 1/s decay of the Dirichlet part.
        y[i] = s[i] * coulomb_delta_kernel(ell, Vc, r, r + s[i], K);
    });
    double mean = 0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);
    // Hann window against leakage from the ends.
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = (y[i] - mean) * (0.5 - 0.5 * std::cos(2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n - 1)));
    auto power = [&](double omega) {
        double re = 0, im = 0;
        for (std::size_t i = 0; i < n; ++i) {
            re += w[i] * std::cos(omega * s[i]);
            im += w[i] * std::sin(omega * s[i]);
        }
        return re * re + im * im;
    };
    const double nyquist = M_PI / h;
    const double d_omega = 2.0 * M_PI / (s_max - s_min);
    double best = d_omega, best_p = -1;
    for (double om = d_omega; om < nyquist; om += 0.25 * d_omega) {
        const double p = power(om);
        if (p > best_p) {
            best_p = p;
            best = om;
        }
    }
    // Golden-section refinement on the bracketing bins.
    double lo = best - 0.25 * d_omega, hi = best + 0.25 * d_omega;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double p1 = power(x1), p2 = power(x2);
    for (int it = 0; it < 80 && hi - lo > 1e-12 * best; ++it) {
        if (p1 > p2) {
            hi = x2;
            x2 = x1;
            p2 = p1;
            x1 = hi - gr * (hi - lo);
            p1 = power(x1);
        } else {
            lo = x1;
            x1 = x2;
            p1 = p2;
            x2 = lo + gr * (hi - lo);
            p2 = power(x2);
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace complab
