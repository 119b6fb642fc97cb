#include "complab/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "complab/detail/march.hpp"
#include "complab/quadrature.hpp"
#include "complab/specfun.hpp"
#include "solver_internal.hpp"

namespace complab {

namespace {

constexpr double kRenormHigh = 1e100;
constexpr double kRenormLow = 1e-100;

using State3 = std::array<double, 3>;

double centrifugal(const PotentialSpec& spec) { return spec.ell * (spec.ell + 1.0); }

// Local coefficient q(r) in u'' = q u (+ source), on one side of R0.
struct LocalQ {
    const PotentialSpec* spec;
    double k2;
    bool interior;
    double L;

    double operator()(double r) const
    {
        double v;
        if (interior)
            v = spec->local_is_zero ? 0.0 : spec->local(r);
        else
            v = spec->Vc / r;
        return L / (r * r) + v - k2;
    }
};

double step_cap(const LocalQ& q, double r)
{
    double a = std::abs(q(r));
    return a > 0 ? 1.0 / std::sqrt(a) : std::numeric_limits<double>::infinity();
}

struct Track {
    double u = 0, up = 0, norm2 = 0, log = 0;
    int nodes = 0;
    int sign = 0;
};

void note_sign(Track& t)
{
    int s = t.u > 0 ? 1 : (t.u < 0 ? -1 : 0);
    if (s != 0) {
        if (t.sign != 0 && s != t.sign) ++t.nodes;
        t.sign = s;
    }
}

// Sample sink: value mantissas with their own log scales.
struct Samples {
    std::vector<double> mant, logs;
    explicit Samples(std::size_t n) : mant(n, 0.0), logs(n, 0.0) {}
    std::vector<double> in_units(double log_scale) const
    {
        std::vector<double> out(mant.size());
        for (std::size_t i = 0; i < mant.size(); ++i)
            out[i] = mant[i] == 0.0 ? 0.0 : mant[i] * std::exp(logs[i] - log_scale);
        return out;
    }
};

struct StopList {
    std::vector<double> r;
    std::vector<int> slot;  // sample index or -1
};

// Sample radii inside the closed segment plus local breakpoints, ordered along travel.
StopList make_stops(const std::vector<double>& radii, const std::vector<double>& breaks, double r0, double r1,
                    bool include_r0, bool include_r1)
{
    const double lo = std::min(r0, r1), hi = std::max(r0, r1);
    std::vector<std::pair<double, int>> items;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        double r = radii[i];
        bool inside = r > lo && r < hi;
        if (r == r0 && include_r0) inside = true;
        if (r == r1 && include_r1) inside = true;
        if (inside) items.emplace_back(r, static_cast<int>(i));
    }
    for (double b : breaks)
        if (b > lo && b < hi) items.emplace_back(b, -1);
    const bool up = r1 >= r0;
    std::stable_sort(items.begin(), items.end(), [up](const auto& a, const auto& b) {
        return up ? a.first < b.first : a.first > b.first;
    });
    StopList s;
    for (auto& [r, k] : items) {
        s.r.push_back(r);
        s.slot.push_back(k);
    }
    return s;
}

// Marches [u, u', int u^2] from r0 to r1 with renormalization, counting nodes.
// source (optional) adds S(r) to u'' in absolute units at the track's start scale.
void march_local(const LocalQ& q, double r0, double r1, Track& tr, const StopList& stops, Samples* out,
                 const std::function<double(double)>* source, double rtol)
{
    State3 x{tr.u, tr.up, tr.norm2};
    const double dir = r1 >= r0 ? 1.0 : -1.0;
    double src_scale = 1.0;
    auto rhs = [&](const State3& y, State3& dy, double r) {
        double qq = q(r);
        dy[0] = y[1];
        dy[1] = qq * y[0];
        if (source) dy[1] += src_scale * (*source)(r);
        dy[2] = dir * y[0] * y[0];
    };
    auto cap = [&](double r) { return step_cap(q, r); };
    auto visit = [&](double, State3& y, int stop) {
        tr.u = y[0];
        note_sign(tr);
        if (stop >= 0 && out) {
            int slot = stops.slot[static_cast<std::size_t>(stop)];
            if (slot >= 0) {
                out->mant[static_cast<std::size_t>(slot)] = y[0];
                out->logs[static_cast<std::size_t>(slot)] = tr.log;
            }
        }
        double m = std::max(std::abs(y[0]), std::abs(y[1]));
        if (m > kRenormHigh || (m < kRenormLow && m > 0)) {
            double f = 1.0 / m;
            y[0] *= f;
            y[1] *= f;
            y[2] *= f * f;
            src_scale *= f;
            tr.log -= std::log(f);
        }
    };
    detail::march(rhs, x, r0, r1, stops.r, rtol, cap, visit);
    tr.u = x[0];
    tr.up = x[1];
    tr.norm2 = x[2];
}

struct OriginStart {
    double r_s, u, up, norm2, log, c1, c2, rho;
};

OriginStart origin_start(const PotentialSpec& spec, double k2, double R)
{
    const double ell = spec.ell;
    const double a = spec.origin_coulomb;
    double b = 0.0;
    if (!spec.local_is_zero) {
        const double rb = 1e-7 * spec.R0;
        b = spec.local(rb) - a / rb;
    }
    const double scale = 1.0 / (1.0 + std::abs(a) + std::sqrt(std::abs(b - k2)));
    OriginStart o;
    o.rho = std::min(spec.R0, R);
    o.r_s = 1e-4 * std::min(scale, o.rho);
    o.c1 = a / (2.0 * ell + 2.0);
    o.c2 = (a * o.c1 + b - k2) / (2.0 * (2.0 * ell + 3.0));
    const double r = o.r_s;
    const double p = std::pow(r / o.rho, ell + 1.0);
    const double series = 1.0 + o.c1 * r + o.c2 * r * r;
    o.u = p * series;
    o.up = p * ((ell + 1.0) / r * series + o.c1 + 2.0 * o.c2 * r);
    o.norm2 = p * p * r / (2.0 * ell + 3.0);
    o.log = (ell + 1.0) * std::log(o.rho);
    return o;
}

double series_value(const OriginStart& o, double ell, double r)
{
    return std::pow(r / o.rho, ell + 1.0) * (1.0 + o.c1 * r + o.c2 * r * r);
}

// Regular solution on [0, r_end] (r_end <= R0), local or Nyström non-local.
Track interior(const PotentialSpec& spec, double k2, double r_end, const std::vector<double>& radii,
               Samples* out, const SolverOptions& opts)
{
    const OriginStart o = origin_start(spec, k2, r_end);
    Track tr;
    tr.u = o.u;
    tr.up = o.up;
    tr.norm2 = o.norm2;
    tr.log = o.log;
    note_sign(tr);
    if (out) {
        for (std::size_t i = 0; i < radii.size(); ++i) {
            if (radii[i] <= o.r_s) {
                out->mant[i] = radii[i] <= 0 ? 0.0 : series_value(o, spec.ell, radii[i]);
                out->logs[i] = o.log;
            }
        }
    }
    LocalQ q{&spec, k2, true, centrifugal(spec)};
    const StopList stops = make_stops(radii, spec.breakpoints, o.r_s, r_end, false, true);

    if (!spec.has_nonlocal()) {
        march_local(q, o.r_s, r_end, tr, stops, out, nullptr, opts.rtol);
        return tr;
    }

    // Nyström: u = u_h + sum_j w_j U_j phi_j with L phi_j = w(., x_j), U_j = u(x_j).
    const double R0 = spec.R0;
    const int n = std::max(spec.nystrom_nodes,
                           std::min(256, static_cast<int>(std::sqrt(std::max(k2, 0.0)) * R0) + 32));
    const QuadRule rule = gauss_legendre(n, 0.0, R0);
    const std::size_t N = static_cast<std::size_t>(n);
    std::vector<double> y(2 + 2 * N, 0.0);
    y[0] = o.u;
    y[1] = o.up;
    auto rhs = [&](const std::vector<double>& s, std::vector<double>& ds, double r) {
        double qq = q(r);
        ds[0] = s[1];
        ds[1] = qq * s[0];
        for (std::size_t j = 0; j < N; ++j) {
            ds[2 + 2 * j] = s[3 + 2 * j];
            ds[3 + 2 * j] = qq * s[2 + 2 * j] + spec.nonlocal(r, rule.nodes[j]);
        }
    };
    std::vector<double> node_r(rule.nodes.begin(), rule.nodes.end());
    StopList nstops = make_stops(node_r, spec.breakpoints, o.r_s, R0, false, true);
    Eigen::VectorXd uh(n);
    Eigen::MatrixXd phi(n, n);
    for (std::size_t i = 0; i < N; ++i)
        if (rule.nodes[i] <= o.r_s) uh(static_cast<Eigen::Index>(i)) = series_value(o, spec.ell, rule.nodes[i]);
    auto visit = [&](double, std::vector<double>& s, int stop) {
        if (stop < 0) return;
        int slot = nstops.slot[static_cast<std::size_t>(stop)];
        if (slot < 0) return;
        const auto i = static_cast<Eigen::Index>(slot);
        uh(i) = s[0];
        for (std::size_t j = 0; j < N; ++j) phi(i, static_cast<Eigen::Index>(j)) = s[2 + 2 * j];
    };
    auto cap = [&](double r) { return step_cap(q, r); };
    // The kernel responses start at zero; tie their absolute floor to the start amplitude of u.
    const double atol = opts.rtol * 1e-3 * std::abs(o.u);
    detail::march(rhs, y, o.r_s, R0, nstops.r, opts.rtol, cap, visit, atol);

    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) M(i, j) -= phi(i, j) * rule.weights[static_cast<std::size_t>(j)];
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
    const double rc = lu.rcond();
    if (!(rc > 1e-13)) throw ConditioningError("non-local solve: Nyström matrix is singular (rcond " +
                                               std::to_string(rc) + ")");
    const Eigen::VectorXd U = lu.solve(uh);
    std::vector<double> coef(N);
    for (std::size_t j = 0; j < N; ++j) coef[j] = rule.weights[j] * U(static_cast<Eigen::Index>(j));
    std::function<double(double)> source = [&](double r) {
        double s = 0.0;
        for (std::size_t j = 0; j < N; ++j) s += coef[j] * spec.nonlocal(r, rule.nodes[j]);
        return s;
    };
    march_local(q, o.r_s, r_end, tr, stops, out, &source, opts.rtol);
    return tr;
}

WaveValues exterior_pair(double ell, double eta, double rho, double& log_scale)
{
    if (eta == 0.0) {
        log_scale = 0.0;
        return riccati_bessel(ell, rho);
    }
    ScaledWave s = coulomb_wave_scaled({ell, eta}, rho);
    log_scale = s.log_scale;
    return s.w;
}

// Exterior integral of u^2 for Vc = 0 from the k-derivative identity.
double free_exterior_norm(double ell, double k, double A, double B, double a, double b)
{
    auto W = [&](double r) {
        const double x = k * r;
        WaveValues w = riccati_bessel(ell, x);
        const double c = ell * (ell + 1.0) / (x * x) - 1.0;
        const double u = A * w.f + B * w.g;
        const double d = A * w.fp + B * w.gp;
        const double dd = c * u;
        const double up = k * d;
        const double dku = r * d;
        const double dkup = d + k * r * dd;
        return (u * dkup - up * dku) / (2.0 * k);
    };
    return W(a) - W(b);
}

}  // namespace

namespace detail {

double coulomb_phase(double ell, double eta, double rho)
{
    double s = 0;
    WaveValues w = exterior_pair(ell, eta, rho, s);
    if (s > 0) return std::atan2(w.f, w.g * std::exp(-2.0 * s));
    return std::atan2(w.f * std::exp(2.0 * s), w.g);
}

double coulomb_phase_advance(double ell, double eta, double rho0, double rho1)
{
    if (eta == 0.0 && ell == 0.0) return rho1 - rho0;
    const double lam2 = (ell + 0.5) * (ell + 0.5);
    auto p = [&](double r) {
        double v = 1.0 - 2.0 * eta / r - lam2 / (r * r);
        return v > 0 ? std::sqrt(v) : 0.0;
    };
    // Outer zero of p, below which the integrand vanishes.
    const double tp = eta + std::sqrt(eta * eta + lam2);
    const double a = std::max(rho0, tp);
    double approx = 0.0;
    if (rho1 > a) {
        // p is smooth beyond the turning point except for the square-root edge;
        // a substitution r = tp + t^2 removes it.
        const double t0 = std::sqrt(a - tp), t1 = std::sqrt(rho1 - tp);
        const int panels = std::min(4000, static_cast<int>(t1 - t0) + 4);
        QuadRule rule = composite_gauss(t0, t1, panels, 8);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double t = rule.nodes[i];
            approx += rule.weights[i] * p(tp + t * t) * 2.0 * t;
        }
    }
    const double th0 = coulomb_phase(ell, eta, rho0), th1 = coulomb_phase(ell, eta, rho1);
    double d = th1 - th0 - approx;
    d = std::remainder(d, 2.0 * M_PI);
    return std::max(0.0, approx + d);
}

}  // namespace detail

Shot shoot(const PotentialSpec& spec, double k2, double R, const std::vector<double>& radii, ShotNeeds needs,
           const SolverOptions& opts)
{
    if (!(R > 0)) throw SolverError("shoot: R must be positive");
    Shot sh;
    sh.k2 = k2;
    sh.R = R;
    Samples samples(radii.size());
    const double R0 = spec.R0;
    const double r_int = std::min(R, R0);
    Track tr = interior(spec, k2, r_int, radii, &samples, opts);

    if (R <= R0) {
        sh.log_scale = tr.log;
        sh.values = samples.in_units(tr.log);
        sh.uR = tr.u;
        sh.upR = tr.up;
        sh.norm2 = tr.norm2;
        sh.nodes = tr.nodes;
        return sh;
    }

    LocalQ qext{&spec, k2, false, centrifugal(spec)};
    // Under the barrier the Coulomb pair would need a long bridge out to the turning point.
    const bool under_barrier = !needs.exterior && k2 > 0 && spec.Vc > 0 &&
                               std::sqrt(k2) * R < coulomb_turning_point(spec.ell, spec.Vc / (2.0 * std::sqrt(k2)));
    const bool analytic = k2 > 0 && !opts.numeric_exterior && !under_barrier;
    if (!analytic) {
        StopList stops = make_stops(radii, {}, R0, R, false, true);
        march_local(qext, R0, R, tr, stops, &samples, nullptr, opts.rtol);
        sh.log_scale = tr.log;
        sh.values = samples.in_units(tr.log);
        sh.uR = tr.u;
        sh.upR = tr.up;
        sh.norm2 = tr.norm2;
        sh.nodes = tr.nodes;
        return sh;
    }

    // Exterior continuation by Coulomb / Riccati-Bessel functions.
    const double k = std::sqrt(k2);
    const double eta = spec.Vc / (2.0 * k);
    const double ell = spec.ell;
    double s0 = 0;
    const WaveValues w0 = exterior_pair(ell, eta, k * R0, s0);
    const double u0 = tr.u, d0 = tr.up / k;
    const double a = d0 * w0.g - u0 * w0.gp;
    const double b = u0 * w0.fp - d0 * w0.f;
    sh.log_scale = tr.log;
    sh.has_exterior = true;
    sh.A = a * std::exp(-s0);
    sh.B = b * std::exp(s0);
    auto eval = [&](double r, double& u, double& up) {
        double s = 0;
        WaveValues w = exterior_pair(ell, eta, k * r, s);
        const double ef = std::exp(s - s0), eg = std::exp(s0 - s);
        u = a * w.f * ef + b * w.g * eg;
        up = k * (a * w.fp * ef + b * w.gp * eg);
    };
    std::vector<double> vals = samples.in_units(tr.log);
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (radii[i] > R0) {
            double u, up;
            eval(radii[i], u, up);
            vals[i] = u;
        }
    }
    sh.values = std::move(vals);
    eval(R, sh.uR, sh.upR);

    if (needs.norm && spec.Vc != 0.0) {
        Track ext = tr;
        march_local(qext, R0, R, ext, StopList{}, nullptr, nullptr, opts.rtol);
        const double rel = std::exp(ext.log - tr.log);
        sh.norm2 = ext.norm2 * rel * rel;
        sh.nodes = ext.nodes;
        return sh;
    }
    if (needs.norm) sh.norm2 = tr.norm2 + free_exterior_norm(ell, k, sh.A, sh.B, R0, R);
    if (needs.nodes) {
        const double beta = std::atan2(sh.B, sh.A);
        const double th0 = detail::coulomb_phase(ell, eta, k * R0);
        const double adv = detail::coulomb_phase_advance(ell, eta, k * R0, k * R);
        const double t0 = (th0 + beta) / M_PI, t1 = (th0 + adv + beta) / M_PI;
        const double lower = std::floor(t0) + 1.0;
        double upper = std::floor(t1);
        if (std::abs(t1 - std::round(t1)) < 1e-7) upper = std::round(t1) - 1.0;
        sh.nodes = tr.nodes + static_cast<int>(std::max(0.0, upper - lower + 1.0));
    }
    return sh;
}

RadialGrid RadialGrid::uniform(double R, int n_points)
{
    if (!(R > 0) || n_points < 1) throw SolverError("RadialGrid: need R > 0 and at least one interval");
    RadialGrid g;
    g.R = R;
    g.n_points = n_points;
    g.spacing = R / n_points;
    g.points.resize(static_cast<std::size_t>(n_points) + 1);
    for (int i = 0; i <= n_points; ++i) g.points[static_cast<std::size_t>(i)] = R * i / n_points;
    g.points.back() = R;
    return g;
}

double RadialFunction::at(double r) const
{
    const auto& p = grid.points;
    if (p.size() < 2) throw SolverError("RadialFunction::at: empty grid");
    if (r <= p.front()) return samples.front();
    if (r >= p.back()) return samples.back();
    auto it = std::upper_bound(p.begin(), p.end(), r);
    std::ptrdiff_t i = std::distance(p.begin(), it) - 1;
    std::ptrdiff_t n = static_cast<std::ptrdiff_t>(p.size());
    std::ptrdiff_t lo = std::clamp<std::ptrdiff_t>(i - 1, 0, std::max<std::ptrdiff_t>(0, n - 4));
    std::ptrdiff_t hi = std::min(n, lo + 4);
    double v = 0.0;
    for (std::ptrdiff_t a = lo; a < hi; ++a) {
        double l = 1.0;
        for (std::ptrdiff_t b = lo; b < hi; ++b)
            if (b != a) l *= (r - p[static_cast<std::size_t>(b)]) / (p[static_cast<std::size_t>(a)] - p[static_cast<std::size_t>(b)]);
        v += l * samples[static_cast<std::size_t>(a)];
    }
    return v;
}

RadialFunction RadialFunction::scaled(double c) const
{
    RadialFunction out = *this;
    for (auto& s : out.samples) s *= c;
    if (norm2 >= 0) out.norm2 = norm2 * c * c;
    return out;
}

RadialFunction integrate_regular(const PotentialSpec& spec, double k2, const RadialGrid& grid,
                                 const SolverOptions& opts)
{
    if (grid.points.size() < 2) throw SolverError("integrate_regular: empty grid");
    // Sixteen samples per local wavelength at the largest local momentum.
    double kmax2 = std::max(k2, 0.0);
    for (double r : grid.points) {
        if (r < grid.spacing) continue;
        double v = r > spec.R0 ? spec.Vc / r : (spec.local_is_zero ? 0.0 : spec.local(r));
        kmax2 = std::max(kmax2, k2 - v);
    }
    if (kmax2 > 0) {
        const double wavelength = 2.0 * M_PI / std::sqrt(kmax2);
        if (grid.spacing > wavelength / 16.0 * (1.0 + 1e-12))
            throw ResolutionError("integrate_regular: grid spacing " + std::to_string(grid.spacing) +
                                  " under-resolves the local wavelength " + std::to_string(wavelength));
    }
    SolverOptions o = opts;
    o.numeric_exterior = true;
    Shot sh = shoot(spec, k2, grid.R, grid.points, ShotNeeds{true, false}, o);
    RadialFunction f;
    f.grid = grid;
    f.k2 = k2;
    double scale = std::exp(sh.log_scale);
    if (!std::isfinite(scale) || scale == 0.0) {
        double m = 0;
        for (double v : sh.values) m = std::max(m, std::abs(v));
        scale = m > 0 ? 1.0 / m : 1.0;
    }
    f.samples.resize(sh.values.size());
    for (std::size_t i = 0; i < sh.values.size(); ++i) f.samples[i] = sh.values[i] * scale;
    f.samples[0] = 0.0;
    f.norm2 = sh.norm2 * scale * scale;
    return f;
}

int count_nodes(const RadialFunction& wave)
{
    int nodes = 0, last = 0;
    const std::size_t n = wave.samples.size();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double v = wave.samples[i];
        int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
        if (s == 0) continue;
        if (last != 0 && s != last) ++nodes;
        last = s;
    }
    return nodes;
}

namespace detail {

double bound_matching_radius(const PotentialSpec& spec, double E, double R)
{
    const double R0 = spec.R0;
    const double kap2 = -E;
    const double L = centrifugal(spec);
    double rt = R0;
    // Outer root of kappa^2 r^2 + Vc r + L = 0 (allowed region inside it).
    const double disc = spec.Vc * spec.Vc - 4.0 * kap2 * L;
    if (spec.Vc < 0 && disc >= 0 && kap2 > 0) rt = (-spec.Vc + std::sqrt(disc)) / (2.0 * kap2);
    if (kap2 == 0 && spec.Vc < 0) rt = R;
    rt = std::clamp(rt, R0, R);
    if (rt > R0 + 0.95 * (R - R0)) rt = R0 + 0.95 * (R - R0);
    return rt;
}

namespace {

struct Sides {
    Track out, in;
};

Sides two_sides(const PotentialSpec& spec, double E, double R, double r_m, const std::vector<double>& radii,
                Samples* s_out, Samples* s_in, const SolverOptions& opts)
{
    const double R0 = spec.R0;
    Sides sd;
    sd.out = interior(spec, E, std::min(r_m, R0), radii, s_out, opts);
    LocalQ qext{&spec, E, false, centrifugal(spec)};
    if (r_m > R0) {
        StopList st = make_stops(radii, {}, R0, r_m, false, true);
        march_local(qext, R0, r_m, sd.out, st, s_out, nullptr, opts.rtol);
    }
    // Inward from the wall; the segment may cross R0 when r_m == R0 only at the end.
    sd.in.u = 0.0;
    sd.in.up = -1.0;
    // A unit offset keeps the step controller from demanding absolute accuracy on a zero integral.
    sd.in.norm2 = 1.0;
    sd.in.log = 0.0;
    if (s_in) {
        for (std::size_t i = 0; i < radii.size(); ++i)
            if (radii[i] >= R) {
                s_in->mant[i] = 0.0;
                s_in->logs[i] = 0.0;
            }
    }
    StopList st = make_stops(radii, {}, R, r_m, false, false);
    march_local(qext, R, r_m, sd.in, st, s_in, nullptr, opts.rtol);
    sd.in.norm2 -= std::exp(-2.0 * sd.in.log);
    return sd;
}

}  // namespace

double bound_mismatch(const PotentialSpec& spec, double E, double R, double r_m, const SolverOptions& opts)
{
    Sides sd = two_sides(spec, E, R, r_m, {}, nullptr, nullptr, opts);
    const double s = std::max(std::sqrt(std::abs(E)), 1.0 / r_m);
    const double no = std::hypot(sd.out.u, sd.out.up / s);
    const double ni = std::hypot(sd.in.u, sd.in.up / s);
    return (sd.out.u * sd.in.up - sd.out.up * sd.in.u) / (s * no * ni);
}

Shot shoot_two_sided(const PotentialSpec& spec, double E, double R, double r_m, const std::vector<double>& radii,
                     const SolverOptions& opts)
{
    Samples so(radii.size()), si(radii.size());
    Sides sd = two_sides(spec, E, R, r_m, radii, &so, &si, opts);
    const double s = std::max(std::sqrt(std::abs(E)), 1.0 / r_m);
    // Least-squares join of (u, u'/s) at r_m, in units of the outward scale.
    const double c = (sd.out.u * sd.in.u + sd.out.up * sd.in.up / (s * s)) /
                     (sd.in.u * sd.in.u + sd.in.up * sd.in.up / (s * s));
    Shot sh;
    sh.k2 = E;
    sh.R = R;
    sh.log_scale = sd.out.log;
    std::vector<double> vo = so.in_units(sd.out.log);
    std::vector<double> vi = si.in_units(sd.in.log);
    sh.values.resize(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) sh.values[i] = radii[i] <= r_m ? vo[i] : c * vi[i];
    sh.uR = 0.0;
    sh.upR = c * -1.0 * std::exp(-sd.in.log);
    sh.norm2 = sd.out.norm2 + c * c * sd.in.norm2;
    sh.nodes = sd.out.nodes + sd.in.nodes;
    if (sd.out.sign != 0 && sd.in.sign != 0 && sd.out.sign != (c > 0 ? sd.in.sign : -sd.in.sign)) ++sh.nodes;
    return sh;
}

}  // namespace detail

}  // namespace complab
