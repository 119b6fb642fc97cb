#include "complab/completeness.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "complab/asymptotics.hpp"
#include "complab/parallel.hpp"
#include "complab/quadrature.hpp"
#include "complab/specfun.hpp"
#include "completeness_internal.hpp"

namespace complab {

using cplx = std::complex<double>;

std::string to_string(KernelKind kind)
{
    switch (kind) {
    case KernelKind::BoxSubtracted: return "BoxSubtracted";
    case KernelKind::OpenSubtracted: return "OpenSubtracted";
    case KernelKind::CoulombDelta: return "CoulombDelta";
    }
    return "unknown";
}

double KernelField::max_abs() const
{
    double m = 0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

double KernelField::symmetry_defect() const
{
    if (r_grid != rp_grid) throw std::invalid_argument("symmetry_defect: grids differ");
    double d = 0;
    const std::size_t n = r_grid.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) d = std::max(d, std::abs(at(i, j) - at(j, i)));
    return d;
}

std::vector<double> default_kernel_grid(const PotentialSpec& spec, double R, int n)
{
    if (n < 2) throw std::invalid_argument("default_kernel_grid: need at least two points");
    const double a = 0.1 * spec.R0, b = 0.9 * R;
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
    return g;
}

namespace detail {

RadiusUnion radius_union(const std::vector<double>& r_grid, const std::vector<double>& rp_grid)
{
    RadiusUnion u;
    u.radii = r_grid;
    u.radii.insert(u.radii.end(), rp_grid.begin(), rp_grid.end());
    std::sort(u.radii.begin(), u.radii.end());
    u.radii.erase(std::unique(u.radii.begin(), u.radii.end()), u.radii.end());
    auto idx = [&](double r) {
        return static_cast<std::size_t>(std::lower_bound(u.radii.begin(), u.radii.end(), r) - u.radii.begin());
    };
    for (double r : r_grid) u.r_index.push_back(idx(r));
    for (double r : rp_grid) u.rp_index.push_back(idx(r));
    return u;
}

KRule open_k_rule(double K, double panel_width, int order, double k_floor)
{
    if (!(K > 0)) throw std::invalid_argument("open_k_rule: K must be positive");
    KRule kr;
    const double k_top = std::min(K, panel_width);
    std::vector<std::pair<double, double>> low;
    double hi = k_top;
    while (hi / 2.0 > k_floor) {
        low.emplace_back(hi / 2.0, hi);
        hi /= 2.0;
    }
    low.emplace_back(0.0, hi);
    std::reverse(low.begin(), low.end());
    auto append = [&](double a, double b) {
        QuadRule q = gauss_legendre(order, a, b);
        const std::size_t start = kr.rule.nodes.size();
        kr.rule.nodes.insert(kr.rule.nodes.end(), q.nodes.begin(), q.nodes.end());
        kr.rule.weights.insert(kr.rule.weights.end(), q.weights.begin(), q.weights.end());
        return std::make_pair(start, kr.rule.nodes.size());
    };
    for (auto& [a, b] : low) kr.low_panels.push_back(append(a, b));
    if (K > k_top) {
        const int panels = static_cast<int>(std::ceil((K - k_top) / panel_width));
        for (int p = 0; p < panels; ++p) append(k_top + (K - k_top) * p / panels, k_top + (K - k_top) * (p + 1) / panels);
    }
    return kr;
}

double oscillation_panel(double s_max)
{
    // Four periods of sin(k s_max) per panel.
    return 8.0 * M_PI / std::max(s_max, 1e-3);
}

double open_asymptotic_tail(const PotentialSpec& spec, double Vr, double Vrp, double r, double rp, double K)
{
    auto sine_tail = [&](double d) {
        if (d == 0.0) return 0.0;
        const double s = d > 0 ? 1.0 : -1.0;
        return s * (M_PI / 2.0 - sine_integral(K * std::abs(d)));
    };
    const double d = r - rp, s = r + rp;
    const double minus = (Vr - Vrp) / (2.0 * M_PI) * sine_tail(d);
    const double lp = spec.ell * M_PI;
    const double plus_int = std::cos(lp) * (M_PI / 2.0 - sine_integral(K * s)) + std::sin(lp) * cosine_integral(K * s);
    const double plus = (Vr + Vrp) / (2.0 * M_PI) * plus_int;
    return minus - plus;
}

double fourier_bessel_state(double ell, double kappa, double R, double r)
{
    const double jp = riccati_bessel(ell, kappa * R).fp;
    return riccati_bessel(ell, kappa * r).f * std::sqrt(2.0 / R) / std::abs(jp);
}

}  // namespace detail

double sine_series_tail(double x, double a, long M)
{
    const cplx z = std::polar(1.0, x);
    if (std::abs(1.0 - z) < 1e-300) throw AbelDomainError("sine_series_tail: x is a multiple of 2 pi");
    cplx partial = 0;
    for (long m = 1; m <= M; ++m) partial += std::polar(1.0, m * x) / static_cast<double>(m);
    const cplx full = -std::log(1.0 - z);
    return std::imag(std::polar(1.0, a) * (full - partial));
}

AbelResult abel_sum(double f, double x, double a, long M, std::optional<double> endpoint_slope)
{
    if (M < 1) throw std::invalid_argument("abel_sum: M must be positive");
    if (!(x >= -M_PI && x <= 2.0 * M_PI)) throw AbelDomainError("abel_sum: x outside [-pi, 2 pi]");
    const bool endpoint = x == 0.0 || x == 2.0 * M_PI;
    if (endpoint && !endpoint_slope)
        throw AbelDomainError("abel_sum: x at an endpoint needs the slope f'(x) for g(x) = i e^{ia} f'(x)");

    AbelResult out;
    double s = 0, c = 0;
    for (long m = 1; m <= M; ++m) {
        const double t = f * std::sin(m * x + a) / static_cast<double>(m) - c;
        const double n = s + t;
        c = (n - s) - t;
        s = n;
    }
    out.direct = s;
    if (endpoint) {
        // (1 - e^{imx}) vanishes termwise.
        out.accelerated = 0.0;
        return out;
    }
    const cplx g = f * std::polar(1.0, x + a) / (1.0 - std::polar(1.0, x));
    cplx acc = 0;
    for (long m = 1; m <= M; ++m) {
        const double w = 1.0 / static_cast<double>(m) - 1.0 / static_cast<double>(m + 1);
        acc += (1.0 - std::polar(1.0, m * x)) * w;
    }
    // Exact tail of the non-oscillating part: sum_{m>M} 1/(m(m+1)) = 1/(M+1).
    acc += 1.0 / static_cast<double>(M + 1);
    out.accelerated = std::imag(g * acc);
    return out;
}

namespace {

struct BoxBasis {
    std::vector<BoxState> bound, scattering;
    std::vector<double> kappa;  // Fourier-Bessel momenta, size M
};

// Bound states plus the scattering states with node counts nb .. M-1, sampled at radii.
BoxBasis box_basis(const PotentialSpec& spec, double R, int M, const std::vector<double>& radii, bool include_bound,
                   const SolverOptions& opts)
{
    BoxBasis b;
    if (spec.is_free()) {
        // Closed-form free states: the Fourier-Bessel states themselves, no bound states.
        if (M < 10) throw std::invalid_argument("kernel_box: M must be at least the number of bound states plus 10");
        b.kappa = bessel_zeros(spec.ell, R, M);
        b.scattering.resize(static_cast<std::size_t>(M));
        for (int m = 0; m < M; ++m) {
            BoxState& st = b.scattering[static_cast<std::size_t>(m)];
            st.momentum = b.kappa[static_cast<std::size_t>(m)];
            st.energy = st.momentum * st.momentum;
            st.nodes = m;
            st.spacing = 1.0;
            st.sampled.resize(radii.size());
            for (std::size_t i = 0; i < radii.size(); ++i)
                st.sampled[i] = detail::fourier_bessel_state(spec.ell, st.momentum, R, radii[i]);
        }
        return b;
    }
    std::vector<double> kappas = find_box_kappas(spec, R, opts);
    const int nb = static_cast<int>(kappas.size());
    if (M < nb + 10)
        throw std::invalid_argument("kernel_box: M must be at least the number of bound states plus 10");
    const int n_scat = M - nb;
    double k_max = eigenmomentum_expansion(M, R, spec) + 0.5 * M_PI / R;
    std::vector<double> ks;
    for (int attempt = 0; attempt < 6; ++attempt) {
        ks = find_box_momenta(spec, R, k_max, opts);
        if (static_cast<int>(ks.size()) >= n_scat) break;
        k_max += (n_scat - static_cast<int>(ks.size()) + 1) * M_PI / R;
    }
    if (static_cast<int>(ks.size()) < n_scat)
        throw SpectrumMismatchError("kernel_box: fewer scattering states than Bessel states below the cutoff");
    ks.resize(static_cast<std::size_t>(n_scat));

    if (include_bound) b.bound.resize(kappas.size());
    b.scattering.resize(ks.size());
    const std::size_t nbs = include_bound ? kappas.size() : 0;
    parallel_for(nbs + ks.size(), [&](std::size_t i) {
        if (i < nbs) {
            b.bound[i] = make_box_state(spec, R, -kappas[i] * kappas[i], 0.0, radii, opts);
        } else {
            const std::size_t j = i - nbs;
            const double prev = j == 0 ? 0.0 : ks[j - 1];
            b.scattering[j] = make_box_state(spec, R, ks[j] * ks[j], ks[j] - prev, radii, opts);
        }
    });
    for (std::size_t j = 0; j < b.scattering.size(); ++j)
        if (b.scattering[j].nodes != nb + static_cast<int>(j))
            throw SpectrumMismatchError("kernel_box: scattering state " + std::to_string(j) + " has " +
                                        std::to_string(b.scattering[j].nodes) + " nodes, expected " +
                                        std::to_string(nb + static_cast<int>(j)));
    b.kappa = bessel_zeros(spec.ell, R, M);
    return b;
}

// Asymptotic m-th term of the subtracted series.
struct TailTerms {
    double f_minus, x_minus, a_minus, f_plus, x_plus, a_plus;

    TailTerms(const PotentialSpec& spec, double R, double VR, double r, double rp, double Vr, double Vrp)
    {
        f_minus = (R * (Vr - Vrp) - (r - rp) * VR) / (2.0 * M_PI * R);
        x_minus = M_PI * (r - rp) / R;
        a_minus = spec.ell * M_PI * (r - rp) / (2.0 * R);
        f_plus = (R * (Vr + Vrp) - (r + rp) * VR) / (2.0 * M_PI * R);
        x_plus = M_PI * (r + rp) / R;
        a_plus = spec.ell * M_PI * ((r + rp) / (2.0 * R) - 1.0);
    }
    double term(long m) const
    {
        const double md = static_cast<double>(m);
        return (f_minus * std::sin(md * x_minus + a_minus) - f_plus * std::sin(md * x_plus + a_plus)) / md;
    }
    double tail(long M) const
    {
        double t = 0;
        if (f_minus != 0.0 && x_minus != 0.0) t += f_minus * sine_series_tail(x_minus, a_minus, M);
        if (f_plus != 0.0) t -= f_plus * sine_series_tail(x_plus, a_plus, M);
        return t;
    }
    double bound(long M) const
    {
        double b = 0;
        if (x_minus != 0.0) b += std::abs(f_minus) / std::abs(std::sin(0.5 * x_minus));
        b += std::abs(f_plus) / std::abs(std::sin(0.5 * x_plus));
        return b / static_cast<double>(M + 1);
    }
};

}  // namespace

KernelField kernel_box(const PotentialSpec& spec, double R, const std::vector<double>& r_grid,
                       const std::vector<double>& rp_grid, int M, bool accelerated, const BoxKernelOptions& opts)
{
    if (!(R > spec.R0)) throw std::invalid_argument("kernel_box: R must exceed R0");
    for (double r : r_grid)
        if (!(r >= 0 && r <= R)) throw std::invalid_argument("kernel_box: grid outside [0, R]");
    for (double r : rp_grid)
        if (!(r >= 0 && r <= R)) throw std::invalid_argument("kernel_box: grid outside [0, R]");

    const detail::RadiusUnion U = detail::radius_union(r_grid, rp_grid);
    const BoxBasis basis = box_basis(spec, R, M, U.radii, opts.include_bound, opts.solver);
    const std::size_t nr = U.radii.size();
    const int nb = static_cast<int>(basis.bound.size());
    const int nb_all = M - static_cast<int>(basis.scattering.size());

    // Unit-norm samples: phi_m = u sqrt(dk), beta_m the Fourier-Bessel state.
    std::vector<std::vector<double>> phi(basis.scattering.size(), std::vector<double>(nr));
    for (std::size_t j = 0; j < basis.scattering.size(); ++j) {
        const double s = std::sqrt(basis.scattering[j].spacing);
        for (std::size_t i = 0; i < nr; ++i) phi[j][i] = basis.scattering[j].sampled[i] * s;
    }
    std::vector<std::vector<double>> beta(static_cast<std::size_t>(M), std::vector<double>(nr));
    parallel_for(static_cast<std::size_t>(M), [&](std::size_t m) {
        for (std::size_t i = 0; i < nr; ++i)
            beta[m][i] = detail::fourier_bessel_state(spec.ell, basis.kappa[m], R, U.radii[i]);
    });

    KernelField kf;
    kf.r_grid = r_grid;
    kf.rp_grid = rp_grid;
    kf.kind = KernelKind::BoxSubtracted;
    kf.truncation = M;
    kf.accelerated = accelerated;
    kf.values.assign(r_grid.size() * rp_grid.size(), 0.0);

    std::vector<double> Vu(nr);
    for (std::size_t i = 0; i < nr; ++i) Vu[i] = integrated_potential(spec, U.radii[i]);
    const double VR = integrated_potential(spec, R);

    std::vector<double> est(r_grid.size(), 0.0), splice(r_grid.size(), 0.0);
    parallel_for(r_grid.size(), [&](std::size_t a) {
        const std::size_t i = U.r_index[a];
        for (std::size_t b = 0; b < rp_grid.size(); ++b) {
            const std::size_t j = U.rp_index[b];
            double s = 0;
            if (opts.include_bound)
                for (int n = 0; n < nb; ++n)
                    s += basis.bound[static_cast<std::size_t>(n)].sampled[i] *
                         basis.bound[static_cast<std::size_t>(n)].sampled[j];
            double last = 0;
            for (int m = 0; m < M; ++m) {
                double t = -beta[static_cast<std::size_t>(m)][i] * beta[static_cast<std::size_t>(m)][j];
                if (m >= nb_all) {
                    const auto& p = phi[static_cast<std::size_t>(m - nb_all)];
                    t += p[i] * p[j];
                }
                s += t;
                last = t;
            }
            const TailTerms tt(spec, R, VR, U.radii[i], U.radii[j], Vu[i], Vu[j]);
            est[a] = std::max(est[a], tt.bound(M));
            splice[a] = std::max(splice[a], std::abs(last - tt.term(M)));
            if (accelerated) s += tt.tail(M);
            kf.values[a * rp_grid.size() + b] = s;
        }
    });
    kf.truncation_estimate = *std::max_element(est.begin(), est.end());
    kf.splice_residual = *std::max_element(splice.begin(), splice.end());
    return kf;
}

namespace {

struct PanelQuad {
    std::vector<double> nodes, weights;
};

// Composite Gauss rule over [0, hi], panels split at the given cuts, width <= h.
PanelQuad radial_rule(double hi, std::vector<double> cuts, double h, int order)
{
    cuts.push_back(0.0);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    PanelQuad q;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const double a = cuts[c], b = cuts[c + 1];
        if (!(b > a) || a >= hi) continue;
        const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / h)));
        QuadRule r = composite_gauss(a, b, panels, order);
        q.nodes.insert(q.nodes.end(), r.nodes.begin(), r.nodes.end());
        q.weights.insert(q.weights.end(), r.weights.begin(), r.weights.end());
    }
    return q;
}

std::vector<double> sample_target(const TargetFunction& t, const std::vector<double>& nodes)
{
    if (t.batch) {
        std::vector<double> v = t.batch(nodes);
        if (v.size() != nodes.size()) throw std::invalid_argument("expand_function: batch evaluator returned wrong size");
        return v;
    }
    std::vector<double> v(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) v[i] = t.f(nodes[i]);
    return v;
}

double midpoint_value(const TargetFunction& t, double r)
{
    for (double j : t.jumps) {
        if (std::abs(r - j) <= 1e-12 * std::max(1.0, std::abs(j))) {
            const double e = 1e-9 * std::max(1.0, std::abs(j));
            return 0.5 * (t.f(j - e) + t.f(j + e));
        }
    }
    return t.f(r);
}

// Partial sums with the upper-half average used as the accelerated value.
void reconstruct(ExpansionResult& out, const std::vector<double>& coeffs, const std::vector<std::vector<double>>& at_eval,
                 std::size_t first_averaged)
{
    const std::size_t ne = out.r_eval.size();
    out.reconstruction.assign(ne, 0.0);
    out.accelerated.assign(ne, 0.0);
    std::size_t count = 0;
    for (std::size_t n = 0; n < coeffs.size(); ++n) {
        for (std::size_t e = 0; e < ne; ++e) out.reconstruction[e] += coeffs[n] * at_eval[n][e];
        if (n >= first_averaged) {
            for (std::size_t e = 0; e < ne; ++e) out.accelerated[e] += out.reconstruction[e];
            ++count;
        }
    }
    if (count > 0)
        for (auto& v : out.accelerated) v /= static_cast<double>(count);
    else
        out.accelerated = out.reconstruction;
}

}  // namespace

ExpansionResult expand_function(const PotentialSpec& spec, double R, const TargetFunction& target, int M,
                                const std::vector<double>& r_eval, const SolverOptions& opts)
{
    if (!target.f) throw std::invalid_argument("expand_function: empty target");
    if (M < 1) throw std::invalid_argument("expand_function: M must be positive");
    const double hi = target.support_hi > 0 ? std::min(target.support_hi, R) : R;

    std::vector<double> kappas = find_box_kappas(spec, R, opts);
    double k_max = eigenmomentum_expansion(M + static_cast<int>(kappas.size()), R, spec) + 0.5 * M_PI / R;
    std::vector<double> ks;
    for (int attempt = 0; attempt < 6; ++attempt) {
        ks = find_box_momenta(spec, R, k_max, opts);
        if (static_cast<int>(ks.size()) >= M) break;
        k_max += (M - static_cast<int>(ks.size()) + 1) * M_PI / R;
    }
    if (static_cast<int>(ks.size()) < M) throw SolverError("expand_function: not enough scattering states");
    ks.resize(static_cast<std::size_t>(M));

    std::vector<double> cuts = target.jumps;
    cuts.push_back(spec.R0);
    cuts.insert(cuts.end(), spec.breakpoints.begin(), spec.breakpoints.end());
    std::vector<double> inner;
    for (double c : cuts)
        if (c > 0 && c < hi) inner.push_back(c);
    const PanelQuad q = radial_rule(hi, inner, std::min(0.25, 0.5 * M_PI / ks.back()), 10);

    std::vector<double> radii = q.nodes;
    radii.insert(radii.end(), r_eval.begin(), r_eval.end());
    const std::vector<double> fq = sample_target(target, q.nodes);

    ExpansionResult out;
    out.target = target.description;
    out.r_eval = r_eval;
    out.momenta = ks;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) out.norm2 += q.weights[i] * fq[i] * fq[i];

    const std::size_t nb = kappas.size(), ns = ks.size(), ne = r_eval.size();
    std::vector<double> coeffs(nb + ns);
    std::vector<std::vector<double>> at_eval(nb + ns, std::vector<double>(ne));
    parallel_for(nb + ns, [&](std::size_t n) {
        BoxState st;
        double unit = 1.0;
        if (n < nb) {
            st = make_box_state(spec, R, -kappas[n] * kappas[n], 0.0, radii, opts);
        } else {
            const std::size_t j = n - nb;
            const double prev = j == 0 ? 0.0 : ks[j - 1];
            st = make_box_state(spec, R, ks[j] * ks[j], ks[j] - prev, radii, opts);
            unit = std::sqrt(st.spacing);
        }
        double c = 0;
        for (std::size_t i = 0; i < q.nodes.size(); ++i) c += q.weights[i] * fq[i] * st.sampled[i] * unit;
        coeffs[n] = c;
        for (std::size_t e = 0; e < ne; ++e) at_eval[n][e] = st.sampled[q.nodes.size() + e] * unit;
    });
    out.bound_coeffs.assign(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(nb));
    out.scattering_coeffs.assign(coeffs.begin() + static_cast<std::ptrdiff_t>(nb), coeffs.end());
    double sum2 = 0;
    for (double c : coeffs) sum2 += c * c;
    out.parseval_defect = std::abs(out.norm2 - sum2);
    reconstruct(out, coeffs, at_eval, nb + ns / 2);
    out.midpoint_reference.resize(ne);
    for (std::size_t e = 0; e < ne; ++e) out.midpoint_reference[e] = midpoint_value(target, r_eval[e]);
    return out;
}

ExpansionResult expand_function_open(const PotentialSpec& spec, const TargetFunction& target, double K_cutoff,
                                     int quadrature_order, int N_bound, const std::vector<double>& r_eval,
                                     const OpenKernelOptions& opts)
{
    if (!target.f) throw std::invalid_argument("expand_function_open: empty target");
    if (!(target.support_hi > 0)) throw std::invalid_argument("expand_function_open: target needs compact support");
    const double hi = target.support_hi;
    std::vector<double> inner;
    for (double c : target.jumps)
        if (c > 0 && c < hi) inner.push_back(c);
    if (spec.R0 < hi) inner.push_back(spec.R0);
    const PanelQuad q = radial_rule(hi, inner, std::min(0.25, 0.5 * M_PI / K_cutoff), 10);
    std::vector<double> radii = q.nodes;
    radii.insert(radii.end(), r_eval.begin(), r_eval.end());
    const std::vector<double> fq = sample_target(target, q.nodes);

    ExpansionResult out;
    out.target = target.description;
    out.r_eval = r_eval;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) out.norm2 += q.weights[i] * fq[i] * fq[i];
    const std::size_t ne = r_eval.size();

    double s_max = hi;
    for (double r : r_eval) s_max = std::max(s_max, r);
    const double width = opts.panel_width > 0 ? opts.panel_width : detail::oscillation_panel(2.0 * s_max);
    const detail::KRule kr = detail::open_k_rule(K_cutoff, width, quadrature_order, opts.k_floor);
    const std::size_t nk = kr.rule.nodes.size();
    std::vector<double> ck(nk);
    std::vector<std::vector<double>> ev(nk, std::vector<double>(ne));
    parallel_for(nk, [&](std::size_t i) {
        OpenState st = open_state(spec, kr.rule.nodes[i], radii, opts.solver);
        double c = 0;
        for (std::size_t n = 0; n < q.nodes.size(); ++n) c += q.weights[n] * fq[n] * st.values[n];
        ck[i] = c;
        for (std::size_t e = 0; e < ne; ++e) ev[i][e] = st.values[q.nodes.size() + e];
    });

    OpenBound ob = open_bound_states(spec, N_bound, radii, opts.bound_box_R, opts.solver);
    std::vector<double> coeffs;
    std::vector<std::vector<double>> at_eval;
    double sum2 = 0;
    for (std::size_t n = 0; n < ob.kappa.size(); ++n) {
        double c = 0;
        for (std::size_t i = 0; i < q.nodes.size(); ++i) c += q.weights[i] * fq[i] * ob.values[n][i];
        out.bound_coeffs.push_back(c);
        coeffs.push_back(c);
        at_eval.emplace_back(ob.values[n].begin() + static_cast<std::ptrdiff_t>(q.nodes.size()), ob.values[n].end());
        sum2 += c * c;
    }
    for (std::size_t i = 0; i < nk; ++i) {
        out.momenta.push_back(kr.rule.nodes[i]);
        out.scattering_coeffs.push_back(ck[i]);
        coeffs.push_back(ck[i] * kr.rule.weights[i]);
        at_eval.push_back(ev[i]);
        sum2 += kr.rule.weights[i] * ck[i] * ck[i];
    }
    out.parseval_defect = std::abs(out.norm2 - sum2);
    reconstruct(out, coeffs, at_eval, coeffs.size());
    out.accelerated = out.reconstruction;
    out.midpoint_reference.resize(ne);
    for (std::size_t e = 0; e < ne; ++e) out.midpoint_reference[e] = midpoint_value(target, r_eval[e]);
    return out;
}

namespace {

double sum_range(const std::vector<double>& v, std::size_t a, std::size_t b)
{
    double s = 0;
    for (std::size_t i = a; i < b; ++i) s += v[i];
    return s;
}

}  // namespace

RiemannStudy riemann_vs_integral_study(const PotentialSpec& spec, const std::vector<double>& R_sequence, double K,
                                       double r, double rp, const std::vector<double>& K_sweep, double R_sweep,
                                       double tolerance)
{
    if (R_sequence.empty()) throw std::invalid_argument("riemann_vs_integral_study: empty R sequence");
    const double ell = spec.ell;
    auto J = [&](double k) { return 2.0 / M_PI * riccati_bessel(ell, k * r).f * riccati_bessel(ell, k * rp).f; };
    auto U = [&](double k) {
        OpenState st = open_state(spec, k, {r, rp});
        return st.values[0] * st.values[1];
    };

    // Integral of U - J over (0, K].
    const detail::KRule kr = detail::open_k_rule(K, detail::oscillation_panel(r + rp), 32, 1e-4);
    std::vector<double> g(kr.rule.nodes.size());
    parallel_for(g.size(), [&](std::size_t i) { g[i] = kr.rule.weights[i] * (U(kr.rule.nodes[i]) - J(kr.rule.nodes[i])); });
    const double integral = sum_range(g, 0, g.size());

    RiemannStudy s;
    s.R = R_sequence;
    for (double R : R_sequence) {
        std::vector<double> ks = find_box_momenta(spec, R, K);
        std::vector<double> tu(ks.size());
        parallel_for(ks.size(), [&](std::size_t m) { tu[m] = U(ks[m]) * (ks[m] - (m == 0 ? 0.0 : ks[m - 1])); });
        int count = 0;
        {
            const double x0 = K * R / M_PI;
            count = static_cast<int>(x0 + 0.5 * ell) + 4;
        }
        std::vector<double> kap = bessel_zeros(ell, R, count);
        double sj = 0, prev = 0;
        for (double k : kap) {
            if (k > K) break;
            sj += J(k) * (k - prev);
            prev = k;
        }
        s.defect.push_back(std::abs(sum_range(tu, 0, tu.size()) - sj - integral));
    }
    s.decreasing = true;
    for (std::size_t i = 1; i < s.defect.size(); ++i)
        if (!(s.defect[i] < s.defect[i - 1])) s.decreasing = false;

    if (!K_sweep.empty()) {
        const double Rs = R_sweep > 0 ? R_sweep : R_sequence.back();
        const double k_cap = 4.0 * *std::max_element(K_sweep.begin(), K_sweep.end());
        std::vector<double> ks = find_box_momenta(spec, Rs, k_cap);
        // Scattering state m pairs with the Fourier-Bessel state of equal node count.
        const std::size_t nb = find_box_kappas(spec, Rs).size();
        std::vector<double> kap = bessel_zeros(ell, Rs, static_cast<int>(ks.size() + nb) + 1);
        const std::size_t n = ks.size();
        std::vector<double> ru(n), rj(n);
        parallel_for(n, [&](std::size_t m) {
            const std::size_t q = m + nb;
            const double dk = ks[m] - (m == 0 ? 0.0 : ks[m - 1]);
            const double dq = kap[q] - (q == 0 ? 0.0 : kap[q - 1]);
            const double jk = J(ks[m]);
            ru[m] = (U(ks[m]) - jk) * dk;
            rj[m] = jk * dk - J(kap[q]) * dq;
        });
        // Totals from the mean of the partial sums over the upper half.
        auto total = [&](const std::vector<double>& t) {
            double p = 0, acc = 0;
            std::size_t c = 0;
            for (std::size_t m = 0; m < n; ++m) {
                p += t[m];
                if (m >= n / 2) {
                    acc += p;
                    ++c;
                }
            }
            return acc / static_cast<double>(c);
        };
        const double TU = total(ru), TJ = total(rj);
        std::vector<double> rest(n);
        double pu = 0, pj = 0;
        for (std::size_t m = 0; m < n; ++m) {
            rest[m] = std::abs(TU - pu) + std::abs(TJ - pj);
            pu += ru[m];
            pj += rj[m];
        }
        std::vector<double> env;
        for (double Kc : K_sweep) {
            double e = 0;
            for (std::size_t m = 0; m < n; ++m)
                if (ks[m] >= Kc && ks[m] < 2.0 * Kc) e = std::max(e, rest[m]);
            env.push_back(e);
        }
        s.rest = fit_loglog("riemann_rest_vs_K", K_sweep, env, -1.0, tolerance);
        s.rest.upper_bound_only = true;
    }
    return s;
}

bool NormSeriesStudy::halves(double tol) const
{
    if (halving_ratio.empty()) return false;
    for (double q : halving_ratio)
        if (!(std::abs(q / 0.5 - 1.0) <= tol)) return false;
    return true;
}

NormSeriesStudy norm_defect_series_study(const PotentialSpec& spec, const std::vector<double>& R_sequence,
                                         double k_eps, double r, double rp, double k_cap)
{
    NormSeriesStudy s;
    s.R = R_sequence;
    const double ell = spec.ell;
    for (double R : R_sequence) {
        BoxSpectrum sp = find_box_eigenmomenta(spec, R, k_cap, {r, rp});
        double su = 0, MN = 0;
        for (const BoxState& st : sp.scattering) {
            if (st.momentum < k_eps) continue;
            const double n2 = st.N_k * st.N_k;
            if (n2 > 0) su += (n2 - 1.0) / n2 * st.sampled[0] * st.sampled[1] * st.spacing;
            MN = std::max(MN, st.momentum * st.momentum * std::abs(n2 - 1.0));
        }
        std::vector<double> kap = bessel_zeros(ell, R, static_cast<int>(sp.scattering.size()) + 8);
        double sj = 0, MB = 0, prev = 0;
        for (double k : kap) {
            const double dq = k - prev;
            prev = k;
            if (k > k_cap) break;
            if (k < k_eps) continue;
            const double jp = riccati_bessel(ell, k * R).fp;
            const double B2 = 2.0 / (R * dq * jp * jp);
            sj += (B2 - 2.0 / M_PI) * riccati_bessel(ell, k * r).f * riccati_bessel(ell, k * rp).f * dq;
            MB = std::max(MB, k * k * std::abs(B2 - 2.0 / M_PI));
        }
        s.series.push_back(std::abs(su - sj));
        s.M_N.push_back(MN);
        s.M_B.push_back(MB);
    }
    s.series_decreasing = true;
    for (std::size_t i = 1; i < s.series.size(); ++i) {
        if (!(s.series[i] < s.series[i - 1])) s.series_decreasing = false;
        s.halving_ratio.push_back(s.M_N[i] / s.M_N[i - 1]);
    }
    s.M_N_fit = fit_loglog("M_N_vs_R", R_sequence, s.M_N, -1.0, std::log2(1.3));
    return s;
}

}  // namespace complab
