#include "complab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/numeric/odeint.hpp>

#include "complab/parallel.hpp"
#include "complab/quadrature.hpp"
#include "complab/specfun.hpp"

namespace complab {

namespace {

constexpr double kPanel = 0.25;
constexpr int kPanelOrder = 12;

const QuadRule& unit_rule()
{
    static const QuadRule rule = gauss_legendre(kPanelOrder, 0.0, 1.0);
    return rule;
}

double centrifugal(const PotentialSpec& spec) { return spec.ell * (spec.ell + 1.0); }

}  // namespace

WkbFrame::WkbFrame(const PotentialSpec& spec, double k, WkbVariant variant, double r_max)
    : spec_(&spec), k_(k), variant_(variant), r_max_(std::max(r_max, 1e-12))
{
    if (!(k > 0)) throw std::invalid_argument("WkbFrame: k must be positive");
    if (variant == WkbVariant::Bessel && spec.origin_coulomb != 0.0)
        throw std::invalid_argument("WkbFrame: the Bessel variant needs v finite at the origin");
    if (variant == WkbVariant::Coulomb && spec.origin_coulomb != spec.Vc)
        throw std::invalid_argument("WkbFrame: the Coulomb variant needs the origin singularity to equal Vc/r");

    std::vector<double> marks{0.0};
    for (double b : spec.breakpoints)
        if (b > 0 && b < r_max_) marks.push_back(b);
    if (spec.R0 < r_max_) marks.push_back(spec.R0);
    marks.push_back(r_max_);
    edges_.push_back(0.0);
    for (std::size_t i = 0; i + 1 < marks.size(); ++i) {
        const double a = marks[i], b = marks[i + 1];
        const int n = std::max(1, static_cast<int>(std::ceil((b - a) / kPanel)));
        for (int j = 1; j <= n; ++j) edges_.push_back(j == n ? b : a + (b - a) * j / n);
    }
    cumulative_.assign(edges_.size(), 0.0);
    const double k2 = k * k;
    for (std::size_t i = 0; i + 1 < edges_.size(); ++i) {
        const double a = edges_[i], h = edges_[i + 1] - a;
        for (double t : unit_rule().nodes) {
            if (!(k2 - v_eff(a + h * t) > 0))
                throw TurningPointError("wkb: k^2 - v(r) <= 0 at r = " + std::to_string(a + h * t) +
                                        " for k = " + std::to_string(k));
        }
        cumulative_[i + 1] = cumulative_[i] + panel_integral(a, edges_[i + 1]);
    }
}

double WkbFrame::v_eff(double r) const
{
    const PotentialSpec& s = *spec_;
    if (r > s.R0) return variant_ == WkbVariant::Bessel ? s.Vc / r : 0.0;
    if (s.local_is_zero) return 0.0;
    if (variant_ == WkbVariant::Coulomb) return r > 0 ? s.local(r) - s.Vc / r : 0.0;
    return s.local(r);
}

double WkbFrame::lambda(double r) const { return std::sqrt(k_ * k_ - v_eff(r)); }

double WkbFrame::panel_integral(double a, double b) const
{
    const QuadRule& q = unit_rule();
    double s = 0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * lambda(a + (b - a) * q.nodes[i]);
    return s * (b - a);
}

double WkbFrame::Lambda(double r) const
{
    if (r <= 0) return 0.0;
    if (r > r_max_ * (1 + 1e-12)) throw std::invalid_argument("WkbFrame: radius beyond the tabulated range");
    auto it = std::upper_bound(edges_.begin(), edges_.end(), r);
    const std::size_t i = static_cast<std::size_t>(std::distance(edges_.begin(), it)) - 1;
    if (i + 1 >= edges_.size()) return cumulative_.back();
    return cumulative_[i] + (r > edges_[i] ? panel_integral(edges_[i], r) : 0.0);
}

double WkbFrame::primitive(double r) const { return integrated_potential(*spec_, r); }

namespace {

double two_term(const WkbFrame& f, double ell, double r, double C)
{
    if (r <= 0) return 0.0;
    const double k = f.k();
    WaveValues j = riccati_bessel(ell, k * r);
    return C * (j.f - f.primitive(r) / (2.0 * k) * j.fp);
}

double phase_value(const WkbFrame& f, const PotentialSpec& spec, double r, double C)
{
    if (r <= 0) return 0.0;
    const double L = f.Lambda(r);
    if (f.variant() == WkbVariant::Bessel || spec.Vc == 0.0) return C * riccati_bessel(spec.ell, L).f;
    return C * coulomb_wave({spec.ell, spec.Vc / (2.0 * f.k())}, L).f;
}

double max_radius(const std::vector<double>& radii)
{
    double m = 0;
    for (double r : radii) m = std::max(m, r);
    return m;
}

}  // namespace

std::vector<double> wkb_bessel(const PotentialSpec& spec, double k, const std::vector<double>& radii, double C)
{
    WkbFrame frame(spec, k, WkbVariant::Bessel, max_radius(radii));
    std::vector<double> out(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) out[i] = two_term(frame, spec.ell, radii[i], C);
    return out;
}

double wkb_bessel(const PotentialSpec& spec, double k, double r, double C)
{
    return wkb_bessel(spec, k, std::vector<double>{r}, C)[0];
}

std::vector<double> wkb_phase_form(const PotentialSpec& spec, double k, const std::vector<double>& radii,
                                   WkbVariant variant, double C)
{
    WkbFrame frame(spec, k, variant, max_radius(radii));
    std::vector<double> out(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) out[i] = phase_value(frame, spec, radii[i], C);
    return out;
}

double wkb_phase_form(const PotentialSpec& spec, double k, double r, WkbVariant variant, double C)
{
    return wkb_phase_form(spec, k, std::vector<double>{r}, variant, C)[0];
}

namespace {

RadialFunction resolved_solution(const PotentialSpec& spec, double k, double r_max, int samples)
{
    int n = std::max(samples, static_cast<int>(std::ceil(r_max * k / (2.0 * M_PI) * 24.0)) + 64);
    for (int attempt = 0; attempt < 12; ++attempt, n *= 2) {
        try {
            return integrate_regular(spec, k * k, RadialGrid::uniform(r_max, n));
        } catch (const ResolutionError&) {
        }
    }
    throw ResolutionError("wkb_defect: could not resolve the solution on [0, r_max]");
}

std::vector<double> model_values(const PotentialSpec& spec, double k, const std::vector<double>& radii,
                                 WkbModel model)
{
    switch (model) {
        case WkbModel::TwoTerm:
            if (spec.origin_coulomb != 0.0) {
                // Coulomb-origin two-term form built on F and V0.
                WkbFrame frame(spec, k, WkbVariant::Coulomb, max_radius(radii));
                std::vector<double> out(radii.size());
                const double eta = spec.Vc / (2.0 * k);
                for (std::size_t i = 0; i < radii.size(); ++i) {
                    const double r = radii[i];
                    if (r <= 0) continue;
                    WaveValues w = coulomb_wave({spec.ell, eta}, k * r);
                    out[i] = w.f - frame.primitive(r) / (2.0 * k) * w.fp;
                }
                return out;
            }
            return wkb_bessel(spec, k, radii, 1.0);
        case WkbModel::PhaseBessel:
            return wkb_phase_form(spec, k, radii, WkbVariant::Bessel, 1.0);
        case WkbModel::PhaseCoulomb:
            return wkb_phase_form(spec, k, radii, WkbVariant::Coulomb, 1.0);
    }
    return {};
}

double fitted_amplitude(const std::vector<double>& u, const std::vector<double>& m)
{
    double num = 0, den = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        num += u[i] * m[i];
        den += m[i] * m[i];
    }
    return den > 0 ? num / den : 0.0;
}

}  // namespace

WkbDefect wkb_defect(const PotentialSpec& spec, double k, double r_max, WkbModel model, int samples)
{
    RadialFunction u = resolved_solution(spec, k, r_max, samples);
    std::vector<double> m = model_values(spec, k, u.grid.points, model);
    WkbDefect d;
    d.k = k;
    d.amplitude = fitted_amplitude(u.samples, m);
    if (d.amplitude == 0.0) throw SolverError("wkb_defect: model is orthogonal to the solution");
    for (std::size_t i = 0; i < m.size(); ++i)
        d.sup_defect = std::max(d.sup_defect, std::abs(u.samples[i] / d.amplitude - m[i]));
    return d;
}

std::vector<double> wkb_ladder(const PotentialSpec& spec)
{
    const double km = k_min(spec);
    const double s2 = std::sqrt(2.0);
    return {4 * km, 4 * s2 * km, 8 * km, 8 * s2 * km, 16 * km};
}

FitReport wkb_order_study(const PotentialSpec& spec, const std::vector<double>& ks, double r_max, WkbModel model,
                          double tolerance)
{
    std::vector<double> defects(ks.size());
    parallel_for(ks.size(), [&](std::size_t i) { defects[i] = wkb_defect(spec, ks[i], r_max, model).sup_defect; });
    return fit_loglog("wkb_sup_defect", ks, defects, -2.0, tolerance);
}

FitReport nonlocal_invisibility_study(const PotentialSpec& local_only, const PotentialSpec& with_nonlocal,
                                      const std::vector<double>& ks, double r_max, double tolerance)
{
    std::vector<double> change(ks.size());
    parallel_for(ks.size(), [&](std::size_t i) {
        const double k = ks[i];
        RadialFunction a = resolved_solution(local_only, k, r_max, 0);
        RadialFunction b = resolved_solution(with_nonlocal, k, r_max, static_cast<int>(a.grid.n_points));
        if (b.grid.n_points != a.grid.n_points) a = resolved_solution(local_only, k, r_max, b.grid.n_points);
        std::vector<double> m = model_values(local_only, k, a.grid.points, WkbModel::TwoTerm);
        const double ca = fitted_amplitude(a.samples, m), cb = fitted_amplitude(b.samples, m);
        double worst = 0;
        for (std::size_t j = 0; j < m.size(); ++j) worst = std::max(worst, std::abs(b.samples[j] / cb - a.samples[j] / ca));
        change[i] = worst;
    });
    FitReport rep = fit_loglog("nonlocal_defect_change", ks, change, -2.0, tolerance);
    rep.upper_bound_only = true;
    return rep;
}

double bessel_eigenmomentum(int m, double R, double ell)
{
    const double a = -ell * (ell + 1.0);
    return (m + ell / 2.0) * M_PI / R + a / (2.0 * R * m * M_PI);
}

namespace {

double expansion(int m, double R, const PotentialSpec& spec, bool with_log)
{
    const double a = -centrifugal(spec);
    const double lead = (m + spec.ell / 2.0) * M_PI / R;
    const double VR = integrated_potential(spec, R);
    const double c = spec.origin_coulomb;
    if (c == 0.0) return lead + (a + R * VR) / (2.0 * R * m * M_PI);
    // Coulomb-origin form: the log term enters with the sign fixed by the
    // zero of sin(kR - eta log 2kR + sigma_l), sigma_l ~ eta psi(l+1).
    const double psi = digamma(spec.ell + 1.0);
    double k = lead;
    for (int it = 0; it < 100; ++it) {
        double corr = a + R * VR;
        if (with_log) corr -= R * c * (psi - std::log(2.0 * k * R));
        const double next = lead + corr / (2.0 * k * R * R);
        if (std::abs(next - k) <= 1e-15 * std::abs(next)) {
            k = next;
            break;
        }
        k = next;
    }
    return k;
}

}  // namespace

double eigenmomentum_expansion(int m, double R, const PotentialSpec& spec) { return expansion(m, R, spec, true); }

double eigenmomentum_expansion_logfree(int m, double R, const PotentialSpec& spec)
{
    return expansion(m, R, spec, false);
}

double bessel_norm_constant(double ell, double R, int m)
{
    if (m < 1) throw std::invalid_argument("bessel_norm_constant: m must be positive");
    std::vector<double> z = bessel_zeros(ell, R, m);
    const double km = z.back();
    const double prev = m == 1 ? 0.0 : z[z.size() - 2];
    // At a zero of j_l, j_{l-1} = -j_{l+1} = j_l', so -j_{l+1} j_{l-1} = j_l'^2.
    const double d = riccati_bessel(ell, km * R).fp;
    return std::sqrt(2.0 / (R * (km - prev) * d * d));
}

void block_envelope(const std::vector<double>& m, const std::vector<double>& defect, int block,
                    std::vector<double>& m_out, std::vector<double>& d_out)
{
    m_out.clear();
    d_out.clear();
    const std::size_t b = static_cast<std::size_t>(std::max(1, block));
    for (std::size_t i = 0; i + b <= m.size(); i += b) {
        std::size_t best = i;
        for (std::size_t j = i; j < i + b; ++j)
            if (std::abs(defect[j]) > std::abs(defect[best])) best = j;
        m_out.push_back(m[best]);
        d_out.push_back(std::abs(defect[best]));
    }
}

namespace {

// Scattering states of the box up to the one with m = m_hi, with their m index.
struct IndexedSpectrum {
    BoxSpectrum spectrum;
    std::vector<int> m;
};

IndexedSpectrum indexed_spectrum(const PotentialSpec& spec, double R, int m_hi, bool match)
{
    const double k_top = eigenmomentum_expansion(m_hi, R, spec) + 0.5 * M_PI / R;
    SpectrumRequest req;
    req.R = R;
    req.k_max = k_top;
    req.include_bound = false;
    req.match = match;
    IndexedSpectrum out;
    out.spectrum = solve_box_spectrum(spec, req);
    for (const auto& st : out.spectrum.scattering) out.m.push_back(st.nodes + 1);
    return out;
}

}  // namespace

EigenmomentumStudy eigenmomentum_remainder_study(const PotentialSpec& spec, double R, int m_lo, int m_hi, int block,
                                                 double tolerance)
{
    EigenmomentumStudy s;
    std::vector<double> ks = find_box_momenta(spec, R, eigenmomentum_expansion(m_hi, R, spec) + 0.5 * M_PI / R);
    if (ks.empty()) throw SolverError("eigenmomentum_remainder_study: empty spectrum");
    const int base = shoot(spec, ks[0] * ks[0], R, {}, ShotNeeds{false, true}).nodes + 1;
    std::vector<double> ms, defects;
    for (std::size_t j = 0; j < ks.size(); ++j) {
        const int m = base + static_cast<int>(j);
        if (m < m_lo || m > m_hi) continue;
        s.m.push_back(m);
        s.k_solver.push_back(ks[j]);
        s.k_predicted.push_back(eigenmomentum_expansion(m, R, spec));
        ms.push_back(m);
        defects.push_back(ks[j] - s.k_predicted.back());
    }
    std::vector<double> em, ed;
    block_envelope(ms, defects, block, em, ed);
    s.remainder = fit_loglog("eigenmomentum_remainder", em, ed, -2.0, tolerance);
    return s;
}

NormConstantStudy norm_constant_study(const PotentialSpec& spec, double R, int m_lo, int m_hi, double bessel_ell,
                                      int block, double tolerance)
{
    NormConstantStudy out;
    IndexedSpectrum sp = indexed_spectrum(spec, R, m_hi, true);
    std::vector<double> ms, dc;
    for (std::size_t j = 0; j < sp.m.size(); ++j) {
        if (sp.m[j] < m_lo || sp.m[j] > m_hi) continue;
        ms.push_back(sp.m[j]);
        dc.push_back(kSqrt2OverPi * sp.spectrum.scattering[j].N_k - kSqrt2OverPi);
    }
    std::vector<double> em, ed;
    block_envelope(ms, dc, block, em, ed);
    out.C = fit_loglog("C_km_defect", em, ed, -2.0, tolerance);

    std::vector<double> mb, db;
    for (int m = m_lo; m <= m_hi; ++m) {
        mb.push_back(m);
        db.push_back(bessel_norm_constant(bessel_ell, R, m) - kSqrt2OverPi);
    }
    block_envelope(mb, db, block, em, ed);
    out.B = fit_loglog("B_kappa_m_defect", em, ed, -2.0, tolerance);
    return out;
}

LargeRStudy spacing_and_norm_large_R(const PotentialSpec& spec, double k_fixed, const std::vector<double>& R_sequence,
                                     double window)
{
    LargeRStudy s;
    s.R = R_sequence;
    s.spacing_defect.resize(R_sequence.size());
    s.norm_defect.resize(R_sequence.size());
    for (std::size_t i = 0; i < R_sequence.size(); ++i) {
        const double R = R_sequence[i];
        BoxSpectrum sp = find_box_eigenmomenta(spec, R, k_fixed + window);
        double ds = 0, dn = 0;
        for (std::size_t j = 1; j < sp.scattering.size(); ++j) {
            const BoxState& st = sp.scattering[j];
            if (st.momentum < k_fixed - window) continue;
            ds = std::max(ds, R * std::abs(st.spacing - M_PI / R));
            dn = std::max(dn, std::abs(st.N_k - 1.0));
        }
        s.spacing_defect[i] = ds;
        s.norm_defect[i] = dn;
    }
    s.spacing = fit_loglog("R_spacing_defect", R_sequence, s.spacing_defect, -1.0, 0.5);
    s.spacing.upper_bound_only = true;
    s.norm = fit_loglog("norm_defect", R_sequence, s.norm_defect, -1.0, 0.5);
    s.norm.upper_bound_only = true;
    return s;
}

LowKBound attractive_low_k_bound(const PotentialSpec& spec, const std::vector<double>& R_sequence, double k_eps)
{
    if (!(spec.Vc < 0) && !(spec.Vc == 0 && spec.ell == 0))
        throw std::invalid_argument("attractive_low_k_bound: needs an attractive tail (or Vc = l = 0)");
    LowKBound b;
    b.R = R_sequence;
    for (double R : R_sequence) {
        BoxSpectrum sp = find_box_eigenmomenta(spec, R, k_eps);
        double mx = 0;
        int n = 0;
        for (const auto& st : sp.scattering) {
            if (st.momentum >= k_eps) continue;
            mx = std::max(mx, st.N_k * st.N_k);
            ++n;
        }
        b.max_norm2.push_back(mx);
        b.count.push_back(n);
    }
    if (b.max_norm2.size() >= 2) {
        const double a = b.max_norm2[b.max_norm2.size() - 2], c = b.max_norm2.back();
        b.relative_change = a > 0 ? std::abs(c / a - 1.0) : std::numeric_limits<double>::infinity();
    }
    return b;
}

GamowStudy repulsive_low_k_suppression(const PotentialSpec& spec, const std::vector<double>& ks, double r_probe,
                                       double tolerance)
{
    if (spec.Vc < 0) throw std::invalid_argument("repulsive_low_k_suppression: needs Vc >= 0");
    if (!(r_probe > 0 && r_probe < spec.R0)) throw std::invalid_argument("repulsive_low_k_suppression: need 0 < r_probe < R0");
    const double R = 1.5 * spec.R0;
    SolverOptions analytic;
    Shot zero = shoot(spec, 0.0, R, {r_probe}, ShotNeeds{false, false}, analytic);
    const double log_u0 = std::log(std::abs(zero.values[0])) + zero.log_scale;

    GamowStudy g;
    g.k = ks;
    g.log_D.resize(ks.size());
    g.C_k.resize(ks.size());
    g.ratio.resize(ks.size());
    parallel_for(ks.size(), [&](std::size_t i) {
        const double k = ks[i];
        Shot sh = shoot(spec, k * k, R, {r_probe}, ShotNeeds{false, false}, analytic);
        if (!sh.has_exterior) throw SolverError("repulsive_low_k_suppression: no exterior matching");
        const double amp = std::hypot(sh.A, sh.B);
        // Dirac-normalized value: sqrt(2/pi) u / amp; the shot scale cancels.
        g.log_D[i] = std::log(kSqrt2OverPi * std::abs(sh.values[0]) / amp) - log_u0;
        g.C_k[i] = kSqrt2OverPi * std::abs(sh.A) / amp;
        double log_ref = std::log(g.C_k[i]);
        if (spec.Vc > 0) {
            const double eta = spec.Vc / (2.0 * k);
            log_ref += -0.5 * std::log(eta) - M_PI * eta;
        }
        g.ratio[i] = std::exp(g.log_D[i] - log_ref);
    });
    for (std::size_t i = 1; i < g.ratio.size(); ++i) g.spread = std::max(g.spread, std::abs(g.ratio[i] / g.ratio[i - 1] - 1.0));
    std::vector<double> dk(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) dk[i] = std::exp(g.log_D[i]) / g.C_k[i];
    g.exponent = fit_loglog("D_over_C_vs_k", ks, dk, spec.ell + 1.0, tolerance);
    return g;
}

BoundScaling bound_scaling_study(const PotentialSpec& spec, double R, int n_lo, int n_hi, double r_fixed,
                                 double kappa_tol, double u_tol)
{
    if (!(spec.Vc < 0)) throw std::invalid_argument("bound_scaling_study: needs an attractive Coulomb tail");
    std::vector<BoxState> states = find_box_bound_states(spec, R, {r_fixed});
    if (states.size() < 6)
        throw InsufficientLevelsError("bound_scaling_study: only " + std::to_string(states.size()) +
                                      " bound states at R = " + std::to_string(R));
    BoundScaling b;
    for (const auto& st : states) {
        if (st.nodes < n_lo || st.nodes > n_hi) continue;
        b.n.push_back(st.nodes);
        b.kappa.push_back(st.momentum);
        b.u_at_r.push_back(std::abs(st.sampled[0]));
    }
    if (b.n.size() < 5)
        throw InsufficientLevelsError("bound_scaling_study: fewer than 5 levels in the requested window");
    std::vector<double> n(b.n.begin(), b.n.end()), inv(b.kappa.size());
    for (std::size_t i = 0; i < inv.size(); ++i) inv[i] = 1.0 / b.kappa[i];
    const LineFit qd = fit_line(n, inv);
    b.quantum_defect = qd.intercept / qd.slope;
    std::vector<double> x(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) x[i] = n[i] + b.quantum_defect;
    b.kappa_fit = fit_loglog("kappa_n", x, b.kappa, -1.0, kappa_tol);
    b.u_fit = fit_loglog("u_n_at_r", x, b.u_at_r, -1.5, u_tol);
    return b;
}

NormEquivalent norm_equivalent_ratio(const std::function<double(double)>& lambda, double r_i,
                                     const std::vector<double>& r_f_sequence, double delta)
{
    namespace ode = boost::numeric::odeint;
    using State = std::array<double, 3>;  // Lambda, sin^2-weighted integral, plain integral
    NormEquivalent out;
    std::vector<double> times{r_i};
    for (double r : r_f_sequence) {
        if (!(r > times.back())) throw std::invalid_argument("norm_equivalent_ratio: r_f must increase past r_i");
        times.push_back(r);
    }
    auto rhs = [&](const State& y, State& dy, double r) {
        const double l = lambda(r);
        const double s = std::sin(y[0] + delta);
        dy[0] = l;
        dy[1] = s * s / l;
        dy[2] = 1.0 / l;
    };
    State y{0.0, 0.0, 0.0};
    auto stepper = ode::make_controlled(1e-12, 1e-12, ode::runge_kutta_cash_karp54<State>());
    ode::integrate_times(stepper, rhs, y, times.begin(), times.end(), 1e-3, [&](const State& s, double r) {
        if (r == r_i) return;
        out.r_f.push_back(r);
        out.ratio.push_back(s[1] / (0.5 * s[2]));
    });
    return out;
}

namespace {

// Phase delta with u ~ lambda^-1/2 sin(Lambda + delta) and Lambda(r) = 0.
double local_phase(double u, double up, double lam)
{
    double d = std::atan2(lam * u, up);
    if (d < 0) d += 2.0 * M_PI;
    return d;
}

}  // namespace

NormEquivalent norm_equivalent_scattering(const PotentialSpec& spec, double k, double r_i,
                                          const std::vector<double>& r_f_sequence)
{
    if (!(spec.Vc < 0)) throw std::invalid_argument("norm_equivalent_scattering: needs Vc < 0");
    const double L = centrifugal(spec);
    auto lambda = [&](double r) { return std::sqrt(k * k - spec.Vc / r - L / (r * r)); };
    const double h = 1e-4 * r_i;
    Shot sh = shoot(spec, k * k, r_i * 1.5, {r_i - h, r_i, r_i + h}, ShotNeeds{false, false});
    const double up = (sh.values[2] - sh.values[0]) / (2 * h);
    return norm_equivalent_ratio(lambda, r_i, r_f_sequence, local_phase(sh.values[1], up, lambda(r_i)));
}

NormEquivalent norm_equivalent_bound(const PotentialSpec& spec, int nodes, double R, double r_d,
                                     const std::vector<double>& r_f_sequence)
{
    if (!(spec.Vc < 0)) throw std::invalid_argument("norm_equivalent_bound: needs Vc < 0");
    const double h = 1e-4 * r_d;
    std::vector<BoxState> states = find_box_bound_states(spec, R, {r_d - h, r_d, r_d + h});
    const BoxState* st = nullptr;
    for (const auto& s : states)
        if (s.nodes == nodes) st = &s;
    if (!st) throw InsufficientLevelsError("norm_equivalent_bound: no bound state with the requested node count");
    const double kap = st->momentum, L = centrifugal(spec), V = std::abs(spec.Vc);
    const double disc = V * V - 4.0 * L * kap * kap;
    const double r_t = (V + std::sqrt(std::max(0.0, disc))) / (2.0 * kap * kap);
    const double r_e = 0.5 * r_t;
    auto lambda = [&](double r) { return std::sqrt(V / r - L / (r * r) - kap * kap); };
    std::vector<double> rf;
    for (double r : r_f_sequence) {
        const double c = std::min(r, r_e);
        if (rf.empty() || c > rf.back()) rf.push_back(c);
    }
    const double up = (st->sampled[2] - st->sampled[0]) / (2 * h);
    return norm_equivalent_ratio(lambda, r_d, rf, local_phase(st->sampled[1], up, lambda(r_d)));
}

double repulsive_turning_point(const PotentialSpec& spec, double k)
{
    if (!(k > 0)) throw std::invalid_argument("repulsive_turning_point: k must be positive");
    const double L = centrifugal(spec);
    if (!(spec.Vc > 0 || L > 0))
        throw std::invalid_argument("repulsive_turning_point: no turning point without a repulsive tail or barrier");
    return (spec.Vc + std::sqrt(spec.Vc * spec.Vc + 4.0 * L * k * k)) / (2.0 * k * k);
}

}  // namespace complab
