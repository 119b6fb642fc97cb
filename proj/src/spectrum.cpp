#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include <boost/math/tools/toms748_solve.hpp>

#include "complab/parallel.hpp"
#include "complab/solver.hpp"
#include "complab/specfun.hpp"
#include "solver_internal.hpp"

namespace complab {

namespace {

constexpr double kSqrt2OverPi = 0.79788456080286535588;

int node_count(const PotentialSpec& spec, double E, double R, const SolverOptions& opts)
{
    SolverOptions o = opts;
    return shoot(spec, E, R, {}, ShotNeeds{false, true, false}, o).nodes;
}

double wall_value(const PotentialSpec& spec, double k, double R, const SolverOptions& opts)
{
    Shot s = shoot(spec, k * k, R, {}, ShotNeeds{false, false, false}, opts);
    const double d = std::hypot(s.uR, s.upR / k);
    return d > 0 ? s.uR / d : 0.0;
}

template <class F>
double refine_root(F&& f, double a, double b, double fa, double fb, double rtol)
{
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    auto tol = [rtol](double x, double y) { return std::abs(x - y) <= rtol * std::max(std::abs(x), std::abs(y)); };
    std::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
    return 0.5 * (r.first + r.second);
}

struct Match {
    double N_k, delta;
    std::complex<double> Sp, Sm;
};

Match matching_from(double A, double B)
{
    Match m;
    const double amp = std::hypot(A, B);
    m.N_k = amp / kSqrt2OverPi;
    double d = std::atan2(B, A);
    if (d < 0) d += 2.0 * M_PI;
    if (d >= 2.0 * M_PI) d -= 2.0 * M_PI;
    m.delta = d;
    m.Sp = std::complex<double>(0.0, -0.5) * std::exp(std::complex<double>(0.0, d));
    m.Sm = std::conj(m.Sp);
    return m;
}

void apply_matching(BoxState& st)
{
    Match m = matching_from(st.ext_A, st.ext_B);
    st.N_k = m.N_k;
    st.phase_shift = m.delta;
    st.S_plus = m.Sp;
    st.S_minus = m.Sm;
}

// Coefficients of u = A F + B G from a value and slope at r > R0.
void exterior_coefficients(const PotentialSpec& spec, double k, double r, double u, double up, double& A,
                           double& B)
{
    const double eta = spec.Vc / (2.0 * k);
    ScaledWave w;
    if (eta == 0.0)
        w.w = riccati_bessel(spec.ell, k * r);
    else
        w = coulomb_wave_scaled({spec.ell, eta}, k * r);
    const double d = up / k;
    A = (d * w.w.g - u * w.w.gp) * std::exp(-w.log_scale);
    B = (u * w.w.fp - d * w.w.f) * std::exp(w.log_scale);
}

Shot state_shot(const PotentialSpec& spec, double R, double energy, const std::vector<double>& radii,
                const SolverOptions& opts)
{
    if (energy > 0) return shoot(spec, energy, R, radii, ShotNeeds{true, true}, opts);
    const double r_m = detail::bound_matching_radius(spec, energy, R);
    return detail::shoot_two_sided(spec, energy, R, r_m, radii, opts);
}

}  // namespace

std::vector<double> find_box_kappas(const PotentialSpec& spec, double R, const SolverOptions& opts)
{
    if (!(R > spec.R0)) throw SolverError("find_box_bound_states: R must exceed R0");
    const int n_b = node_count(spec, 0.0, R, opts);
    if (n_b == 0) return {};

    double vmin = 0.0;
    for (int i = 1; i <= 200; ++i) {
        double r = spec.R0 * i / 200.0;
        if (!spec.local_is_zero) vmin = std::min(vmin, spec.local(r));
    }
    if (spec.Vc < 0) vmin = std::min(vmin, spec.Vc / spec.R0);
    double E_low = -std::max(1.0, 2.0 * std::abs(vmin));
    int n_low = node_count(spec, E_low, R, opts);
    for (int guard = 0; n_low > 0; ++guard) {
        if (guard > 60) throw SolverError("find_box_bound_states: no lower energy bound found");
        E_low *= 4.0;
        n_low = node_count(spec, E_low, R, opts);
    }

    // Isolate one eigenvalue per bracket by node-count bisection.
    struct Bracket {
        double a, b;
    };
    std::vector<Bracket> brackets;
    struct Item {
        double a, b;
        int na, nb;
    };
    std::vector<Item> stack{{E_low, 0.0, n_low, n_b}};
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        if (it.nb - it.na <= 0) continue;
        if (it.nb - it.na == 1) {
            brackets.push_back({it.a, it.b});
            continue;
        }
        if (it.b - it.a <= 1e-14 * std::max(std::abs(it.a), std::abs(it.b)))
            throw SolverError("find_box_bound_states: degenerate eigenvalues");
        const double m = 0.5 * (it.a + it.b);
        const int nm = node_count(spec, m, R, opts);
        stack.push_back({m, it.b, nm, it.nb});
        stack.push_back({it.a, m, it.na, nm});
    }
    std::sort(brackets.begin(), brackets.end(), [](const Bracket& x, const Bracket& y) { return x.a < y.a; });

    std::vector<double> kappas(brackets.size());
    parallel_for(brackets.size(), [&](std::size_t i) {
        double a = brackets[i].a, b = brackets[i].b;
        // Tighten by node counts until the mismatch changes sign across the bracket.
        const int target = node_count(spec, a, R, opts);
        double E = 0;
        for (int attempt = 0;; ++attempt) {
            const double r_m = detail::bound_matching_radius(spec, 0.5 * (a + b), R);
            auto f = [&](double e) { return detail::bound_mismatch(spec, e, R, r_m, opts); };
            const double b_eval = b == 0.0 ? -1e-300 : b;
            const double fa = f(a), fb = f(b_eval);
            if (fa * fb <= 0) {
                E = refine_root(f, a, b_eval, fa, fb, opts.root_rtol);
                break;
            }
            if (attempt > 200) throw SolverError("find_box_bound_states: root refinement failed");
            const double m = 0.5 * (a + b);
            if (node_count(spec, m, R, opts) == target)
                a = m;
            else
                b = m;
        }
        kappas[i] = std::sqrt(-E);
    });
    return kappas;
}

std::vector<double> find_box_momenta(const PotentialSpec& spec, double R, double k_max, const SolverOptions& opts)
{
    if (!(R > spec.R0)) throw SolverError("find_box_eigenmomenta: R must exceed R0");
    if (!(k_max > 0)) throw SolverError("find_box_eigenmomenta: k_max must be positive");
    double h = opts.scan_fraction * M_PI / R;
    for (int attempt = 0; attempt < 5; ++attempt, h *= 0.5) {
        const double k_lo = 1e-4 * std::min(h, k_max);
        const std::size_t n = static_cast<std::size_t>(std::ceil((k_max - k_lo) / h)) + 1;
        std::vector<double> ks(n), fs(n);
        for (std::size_t i = 0; i < n; ++i) ks[i] = std::min(k_max, k_lo + h * static_cast<double>(i));
        ks.back() = k_max;
        parallel_for(n, [&](std::size_t i) { fs[i] = wall_value(spec, ks[i], R, opts); });

        std::vector<std::size_t> brackets;
        std::vector<double> exact;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (fs[i] == 0.0 && i > 0) exact.push_back(ks[i]);
            if (fs[i] * fs[i + 1] < 0) brackets.push_back(i);
        }
        if (fs[n - 1] == 0.0) exact.push_back(ks[n - 1]);
        std::vector<double> roots(brackets.size());
        parallel_for(brackets.size(), [&](std::size_t j) {
            const std::size_t i = brackets[j];
            auto f = [&](double k) { return wall_value(spec, k, R, opts); };
            roots[j] = refine_root(f, ks[i], ks[i + 1], fs[i], fs[i + 1], opts.root_rtol);
        });
        roots.insert(roots.end(), exact.begin(), exact.end());
        std::sort(roots.begin(), roots.end());

        // Node counts must run consecutively from the count just above threshold.
        const int base = node_count(spec, k_lo * k_lo, R, opts);
        std::vector<int> nodes(roots.size());
        parallel_for(roots.size(), [&](std::size_t j) { nodes[j] = node_count(spec, roots[j] * roots[j], R, opts); });
        bool ok = true;
        for (std::size_t j = 0; j < roots.size(); ++j)
            if (nodes[j] != base + static_cast<int>(j)) ok = false;
        if (ok && (roots.empty() || roots.back() < k_max)) {
            const int top = node_count(spec, k_max * k_max, R, opts);
            if (top != base + static_cast<int>(roots.size())) ok = false;
        }
        if (ok) return roots;
    }
    throw MissedRootError("find_box_eigenmomenta: node counts stay non-consecutive after rescans");
}

BoxState make_box_state(const PotentialSpec& spec, double R, double energy, double spacing,
                        const std::vector<double>& radii, const SolverOptions& opts)
{
    Shot sh = state_shot(spec, R, energy, radii, opts);
    BoxState st;
    st.bound = energy <= 0;
    st.energy = energy;
    st.momentum = std::sqrt(std::abs(energy));
    st.nodes = sh.nodes;
    st.spacing = st.bound ? 0.0 : spacing;
    if (!(sh.norm2 > 0) || !std::isfinite(sh.norm2))
        throw ZeroNormError("normalize_box: state has zero norm at energy " + std::to_string(energy));
    const double target = st.bound ? 1.0 : 1.0 / spacing;
    if (!st.bound && !(spacing > 0)) throw SolverError("make_box_state: spacing must be positive");
    const double c = std::sqrt(target / sh.norm2);
    st.log_norm_constant = std::log(c) - sh.log_scale;
    st.norm_constant = std::exp(st.log_norm_constant);
    st.norm2 = target;
    st.sampled.resize(sh.values.size());
    for (std::size_t i = 0; i < sh.values.size(); ++i) st.sampled[i] = c * sh.values[i];
    if (!st.bound && R > spec.R0) {
        double A = sh.A, B = sh.B;
        if (!sh.has_exterior) exterior_coefficients(spec, st.momentum, R, sh.uR, sh.upR, A, B);
        st.ext_A = c * A;
        st.ext_B = c * B;
        apply_matching(st);
    }
    return st;
}

RadialFunction materialize(const PotentialSpec& spec, const BoxState& state, const RadialGrid& grid,
                           const SolverOptions& opts)
{
    Shot sh = state_shot(spec, grid.R, state.energy, grid.points, opts);
    if (!(sh.norm2 > 0)) throw ZeroNormError("materialize: state has zero norm");
    const double sign = state.norm_constant < 0 ? -1.0 : 1.0;
    const double c = sign * std::sqrt(state.norm2 / sh.norm2);
    RadialFunction f;
    f.grid = grid;
    f.k2 = state.energy;
    f.samples.resize(sh.values.size());
    for (std::size_t i = 0; i < sh.values.size(); ++i) f.samples[i] = c * sh.values[i];
    if (!f.samples.empty() && grid.points.front() == 0.0) f.samples[0] = 0.0;
    f.norm2 = state.norm2;
    return f;
}

BoxState scale_state(const BoxState& state, double c)
{
    BoxState s = state;
    for (auto& v : s.sampled) v *= c;
    if (!s.wave.samples.empty()) s.wave = s.wave.scaled(c);
    s.norm2 *= c * c;
    s.norm_constant *= c;
    s.log_norm_constant += std::log(std::abs(c));
    s.ext_A *= c;
    s.ext_B *= c;
    if (!s.bound && (s.ext_A != 0.0 || s.ext_B != 0.0)) apply_matching(s);
    return s;
}

BoxState normalize_box(const BoxState& state, double spacing)
{
    const double n2 = state.wave.samples.empty() || state.wave.norm2 < 0 ? state.norm2 : state.wave.norm2;
    if (!(n2 > 0) || !std::isfinite(n2)) throw ZeroNormError("normalize_box: state has zero norm");
    if (!state.bound && !(spacing > 0)) throw SolverError("normalize_box: spacing must be positive");
    const double target = state.bound ? 1.0 : 1.0 / spacing;
    BoxState s = scale_state(state, std::sqrt(target / n2));
    s.norm2 = target;
    if (!s.wave.samples.empty()) s.wave.norm2 = target;
    if (!s.bound) s.spacing = spacing;
    return s;
}

BoxSpectrum solve_box_spectrum(const PotentialSpec& spec, const SpectrumRequest& req)
{
    BoxSpectrum out;
    out.spec = &spec;
    out.R = req.R;
    out.k_cutoff = req.k_max;
    out.radii = req.radii;
    std::vector<double> kappas;
    if (req.include_bound) kappas = find_box_kappas(spec, req.R, req.options);
    std::vector<double> ks;
    if (req.k_max > 0) ks = find_box_momenta(spec, req.R, req.k_max, req.options);
    out.bound.resize(kappas.size());
    out.scattering.resize(ks.size());
    parallel_for(kappas.size() + ks.size(), [&](std::size_t i) {
        if (i < kappas.size()) {
            out.bound[i] = make_box_state(spec, req.R, -kappas[i] * kappas[i], 0.0, req.radii, req.options);
        } else {
            const std::size_t j = i - kappas.size();
            const double prev = j == 0 ? 0.0 : ks[j - 1];
            out.scattering[j] = make_box_state(spec, req.R, ks[j] * ks[j], ks[j] - prev, req.radii, req.options);
        }
    });
    return out;
}

BoxSpectrum find_box_eigenmomenta(const PotentialSpec& spec, double R, double k_max, const std::vector<double>& radii,
                                  const SolverOptions& opts)
{
    SpectrumRequest req;
    req.R = R;
    req.k_max = k_max;
    req.radii = radii;
    req.include_bound = false;
    req.options = opts;
    return solve_box_spectrum(spec, req);
}

std::vector<BoxState> find_box_bound_states(const PotentialSpec& spec, double R, const std::vector<double>& radii,
                                            const SolverOptions& opts)
{
    SpectrumRequest req;
    req.R = R;
    req.k_max = 0;
    req.radii = radii;
    req.options = opts;
    return solve_box_spectrum(spec, req).bound;
}

Matching match_asymptotics(const BoxState& state, const PotentialSpec& spec, double R)
{
    if (state.bound) throw SolverError("match_asymptotics: bound state has no asymptotic phase");
    if (!(R > spec.R0)) throw SolverError("match_asymptotics: R must exceed R0");
    const double k = state.momentum;
    if (state.ext_A == 0.0 && state.ext_B == 0.0)
        throw SolverError("match_asymptotics: h+ and h- are collinear (no exterior data)");
    Match m = matching_from(state.ext_A, state.ext_B);
    Matching out;
    out.N_k = m.N_k;
    out.phase_shift = m.delta;
    out.S_plus = m.Sp;
    out.S_minus = m.Sm;

    // Independent check: numeric exterior propagation at 20 points in (R0, R).
    std::vector<double> check(20);
    for (int i = 0; i < 20; ++i) check[static_cast<std::size_t>(i)] = spec.R0 + (R - spec.R0) * (i + 0.5) / 20.0;
    SolverOptions o;
    o.numeric_exterior = true;
    Shot sh = shoot(spec, state.energy, R, check, ShotNeeds{true, false}, o);
    const double sign = state.norm_constant < 0 ? -1.0 : 1.0;
    const double c = sign * std::sqrt(state.norm2 / sh.norm2);
    const double eta = spec.Vc / (2.0 * k);
    double worst = 0, scale = 0;
    for (std::size_t i = 0; i < check.size(); ++i) {
        const double rho = k * check[i];
        WaveValues w = eta == 0.0 ? riccati_bessel(spec.ell, rho) : coulomb_wave({spec.ell, eta}, rho);
        const double model = state.ext_A * w.f + state.ext_B * w.g;
        const double num = c * sh.values[i];
        worst = std::max(worst, std::abs(model - num));
        scale = std::max(scale, std::abs(num));
    }
    out.max_residual = scale > 0 ? worst / scale : worst;
    return out;
}

OpenState open_state(const PotentialSpec& spec, double k, const std::vector<double>& radii, const SolverOptions& opts)
{
    if (!(k > 0)) throw SolverError("open_state: k must be positive");
    double rmax = spec.R0 * 1.5;
    for (double r : radii) rmax = std::max(rmax, r * 1.0000001);
    SolverOptions o = opts;
    o.numeric_exterior = false;
    Shot sh = shoot(spec, k * k, rmax, radii, ShotNeeds{false, false}, o);
    OpenState st;
    st.k = k;
    const double amp = std::hypot(sh.A, sh.B);
    if (!(amp > 0) || !std::isfinite(amp)) throw SolverError("open_state: degenerate asymptotic amplitude");
    double d = std::atan2(sh.B, sh.A);
    if (d < 0) d += 2.0 * M_PI;
    st.phase_shift = d;
    st.amplitude = amp;
    st.log_amplitude = std::log(amp) + sh.log_scale;
    st.values.resize(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) st.values[i] = sh.values[i] * kSqrt2OverPi / amp;
    return st;
}

ConvergenceReport open_limit_extrapolate(const std::function<double(double)>& probe,
                                         const std::vector<double>& R_sequence)
{
    if (R_sequence.empty()) throw SolverError("open_limit_extrapolate: empty R sequence");
    for (std::size_t i = 1; i < R_sequence.size(); ++i)
        if (!(R_sequence[i] > R_sequence[i - 1])) throw SolverError("open_limit_extrapolate: R must increase");
    ConvergenceReport rep;
    rep.R_sequence = R_sequence;
    rep.values.resize(R_sequence.size());
    for (std::size_t i = 0; i < R_sequence.size(); ++i) rep.values[i] = probe(R_sequence[i]);
    for (std::size_t i = 1; i < rep.values.size(); ++i) rep.defects.push_back(std::abs(rep.values[i] - rep.values[i - 1]));
    rep.extrapolated = rep.values.back();
    rep.defect_estimate = rep.defects.empty() ? 0.0 : rep.defects.back();
    rep.converging = true;
    for (std::size_t i = 1; i < rep.defects.size(); ++i)
        if (rep.defects[i] > rep.defects[i - 1]) rep.converging = false;
    return rep;
}

ZeroEnergyDiagnosis zero_energy_probe(const PotentialSpec& spec, double R_large, const SolverOptions& opts)
{
    if (!(R_large > spec.R0)) throw SolverError("zero_energy_probe: R must exceed R0");
    std::vector<double> radii;
    const int n = 40;
    for (int i = 0; i < n; ++i) radii.push_back(R_large * (0.45 + 0.1 * i / (n - 1)));
    for (int i = 0; i < n; ++i) radii.push_back(R_large * (0.9 + 0.1 * i / (n - 1)));
    Shot sh = shoot(spec, 0.0, R_large, radii, ShotNeeds{false, false}, opts);
    double mid = 0, far = 0;
    for (int i = 0; i < n; ++i) mid = std::max(mid, std::abs(sh.values[static_cast<std::size_t>(i)]));
    for (int i = n; i < 2 * n; ++i) far = std::max(far, std::abs(sh.values[static_cast<std::size_t>(i)]));
    ZeroEnergyDiagnosis d;
    d.growth_ratio = mid > 0 ? far / mid : 0.0;
    d.log_u_far = std::log(far) + sh.log_scale;
    d.grows = d.growth_ratio > 1.25;
    d.marginal = !d.grows && d.growth_ratio > 0.75;
    return d;
}

}  // namespace complab
