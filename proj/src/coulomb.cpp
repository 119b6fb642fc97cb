#include "complab/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <optional>

#include "complab/detail/march.hpp"

namespace complab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Seams between the continued-fraction regime and ODE bridging. Steed's method
// is used for rho >= max(kTurnFactor * rho_tp + kTurnOffset, kSteedFloor).
constexpr double kTurnFactor = 1.0;
constexpr double kTurnOffset = 1.0;
constexpr double kSteedFloor = 2.0;
constexpr double kBridgeRtol = 1e-13;

struct Cf1 {
    double f = 0;  // F'/F
    double sign = 1;
    bool ok = false;
};

// Lentz evaluation of F'/F at (ell, eta, x); the sign tracks F relative to a
// large-ell reference where F > 0.
Cf1 coulomb_cf1(double ell, double eta, double x)
{
    const double tiny = 1e-300;
    const double xi = 1.0 / x;
    const double limit = ell + 1.0 + 2.0e6 + 4.0 * x;
    Cf1 r;
    double pk = ell + 1.0;
    double F = eta / pk + pk * xi;
    if (std::abs(F) < tiny) F = tiny;
    double D = 0.0, C = F, df;
    do {
        double pk1 = pk + 1.0;
        double ek = eta / pk;
        double rk2 = 1.0 + ek * ek;
        double tk = (pk + pk1) * (xi + ek / pk1);
        D = tk - rk2 * D;
        C = tk - rk2 / C;
        if (std::abs(C) < tiny) C = tiny;
        if (std::abs(D) < tiny) D = tiny;
        D = 1.0 / D;
        df = D * C;
        F *= df;
        if (D < 0.0) r.sign = -r.sign;
        pk = pk1;
        if (pk > limit) return r;
    } while (std::abs(df - 1.0) > 2.0 * kEps);
    r.f = F;
    r.ok = true;
    return r;
}

struct Cf2 {
    double p = 0, q = 0;  // (G' + iF') / (G + iF)
    bool ok = false;
};

Cf2 coulomb_cf2(double ell, double eta, double x)
{
    const double wi = 2.0 * eta;
    const double xi = 1.0 / x;
    const double e2mm1 = eta * eta + ell * (ell + 1.0);
    double ar = -e2mm1, ai = eta;
    double br = 2.0 * (x - eta), bi = 2.0;
    double dr = br / (br * br + bi * bi);
    double di = -bi / (br * br + bi * bi);
    double dp = -xi * (ar * di + ai * dr);
    double dq = xi * (ar * dr - ai * di);
    double pk = 0.0, P = 0.0, Q = 1.0 - eta * xi;
    Cf2 r;
    int it = 0;
    do {
        P += dp;
        Q += dq;
        pk += 2.0;
        ar += pk;
        ai += wi;
        bi += 2.0;
        double D = ar * dr - ai * di + br;
        di = ai * dr + ar * di + bi;
        double c = 1.0 / (D * D + di * di);
        dr = c * D;
        di = -c * di;
        double A = br * dr - bi * di - 1.0;
        double B = bi * dr + br * di;
        c = dp * A - dq * B;
        dq = dp * B + dq * A;
        dp = c;
        if (++it > 200000) return r;
    } while (std::abs(dp) + std::abs(dq) > (std::abs(P) + std::abs(Q)) * 2.0 * kEps);
    if (!(Q > 0)) return r;
    r.p = P;
    r.q = Q;
    r.ok = true;
    return r;
}

std::optional<WaveValues> steed(double ell, double eta, double x)
{
    Cf1 c1 = coulomb_cf1(ell, eta, x);
    if (!c1.ok) return std::nullopt;
    Cf2 c2 = coulomb_cf2(ell, eta, x);
    if (!c2.ok) return std::nullopt;
    const double a = c1.f - c2.p;
    WaveValues w;
    w.f = c1.sign / std::sqrt(a * a / c2.q + c2.q);
    w.fp = c1.f * w.f;
    w.g = a * w.f / c2.q;
    w.gp = c2.p * w.g - c2.q * w.f;
    if (!std::isfinite(w.f) || !std::isfinite(w.g)) return std::nullopt;
    return w;
}

double steed_threshold(double ell, double eta)
{
    return std::max(kTurnFactor * coulomb_turning_point(ell, eta) + kTurnOffset, kSteedFloor);
}

using Pair = std::array<double, 2>;

struct Tracked {
    Pair y{0, 0};
    double log = 0;  // true value = y * exp(log)
};

// Solution of the Coulomb equation with log-scale tracking.
template <class Start>
void march_coulomb(double ell, double eta, Tracked& t, double from, double to,
                   const std::vector<double>& stops, Start&& on_stop)
{
    const double l2 = ell * (ell + 1.0);
    auto q = [=](double r) { return l2 / (r * r) + 2.0 * eta / r - 1.0; };
    auto rhs = [&](const Pair& y, Pair& dy, double r) {
        dy[0] = y[1];
        dy[1] = q(r) * y[0];
    };
    auto cap = [&](double r) { return 0.5 / std::sqrt(std::abs(q(r)) + 1e-300); };
    auto visit = [&](double r, Pair& y, int stop) {
        double m = std::abs(y[0]) + std::abs(y[1]);
        if (m > 1e150 || (m < 1e-150 && m > 0)) {
            double lm = std::log(m);
            y[0] /= m;
            y[1] /= m;
            t.log += lm;
        }
        if (stop >= 0) on_stop(r, y, stop);
    };
    detail::march(rhs, t.y, from, to, stops, kBridgeRtol, cap, visit);
}

// Regular solution from its power series rho^(l+1) sum a_j rho^j.
Tracked regular_series(double ell, double eta, double rho)
{
    double a_prev2 = 0.0, a_prev = 1.0;
    double sum = 1.0, dsum = 0.0, pw = 1.0;
    for (int j = 1; j < 400; ++j) {
        double a = (2.0 * eta * a_prev - a_prev2) / (j * (2.0 * ell + 1.0 + j));
        double pj = pw * rho;
        double term = a * pj;
        sum += term;
        dsum += j * a * pw;
        a_prev2 = a_prev;
        a_prev = a;
        pw = pj;
        if (std::abs(term) < 1e-17 * std::abs(sum) && j > 3) break;
    }
    Tracked t;
    t.y = {sum, (ell + 1.0) / rho * sum + dsum};
    t.log = (ell + 1.0) * std::log(rho);
    return t;
}

}  // namespace

double coulomb_turning_point(double ell, double eta)
{
    double d = eta * eta + ell * (ell + 1.0);
    double r = eta + std::sqrt(std::max(d, 0.0));
    return std::max(r, 0.0);
}

WaveValues ScaledWave::unscaled() const
{
    if (std::abs(log_scale) > 700.0)
        throw SpecfunError("Coulomb function outside the representable range (log scale " +
                           std::to_string(log_scale) + ")");
    double e = std::exp(log_scale);
    return {w.f * e, w.fp * e, w.g / e, w.gp / e};
}

ScaledWave coulomb_wave_scaled(const CoulombParams& p, double rho)
{
    if (!(p.ell >= -0.5)) throw SpecfunError("coulomb_wave: ell below -1/2");
    if (!(rho > 0)) throw SpecfunError("coulomb_wave: rho must be positive");
    if (!std::isfinite(p.eta)) throw SpecfunError("coulomb_wave: eta not finite");
    const double ell = p.ell, eta = p.eta;

    const double rs = steed_threshold(ell, eta);
    if (rho >= rs) {
        if (auto w = steed(ell, eta, rho)) return {*w, 0.0};
    }
    // bridge from the trusted point rs
    double anchor = std::max(rs, rho);
    std::optional<WaveValues> ws;
    for (int tries = 0; tries < 6 && !ws; ++tries) {
        ws = steed(ell, eta, anchor);
        if (!ws) anchor *= 1.5;
    }
    if (!ws) throw SpecfunError("coulomb_wave: no evaluation regime converged (continued fractions failed at rho=" +
                                std::to_string(anchor) + ")");

    // regular solution: power series near the origin, marched outward to the anchor
    const double rho0 = std::min(rho, 0.05 / (1.0 + std::abs(eta) + 0.1 * std::abs(ell)));
    Tracked reg = regular_series(ell, eta, rho0);
    Tracked at_rho = reg;
    march_coulomb(ell, eta, reg, rho0, anchor, {rho}, [&](double, const Pair& y, int) {
        at_rho.y = y;
        at_rho.log = reg.log;
    });
    // scale so that (y, y') matches Steed at the anchor in the least-squares sense
    const double num = ws->f * reg.y[0] + ws->fp * reg.y[1];
    const double den = reg.y[0] * reg.y[0] + reg.y[1] * reg.y[1];
    if (!(den > 0) || num == 0.0) throw SpecfunError("coulomb_wave: degenerate regular bridge");
    const double c = num / den;  // F = c * y * exp(reg.log)
    double logF = std::log(std::abs(c)) + at_rho.log - reg.log;
    double sc = c > 0 ? 1.0 : -1.0;

    // irregular solution: marched inward from the anchor (dominant direction)
    Tracked irr;
    irr.y = {ws->g, ws->gp};
    march_coulomb(ell, eta, irr, anchor, rho, {}, [](double, const Pair&, int) {});
    if (!std::isfinite(irr.y[0])) throw SpecfunError("coulomb_wave: irregular bridge overflow");

    ScaledWave out;
    out.log_scale = logF;
    out.w.f = sc * at_rho.y[0];
    out.w.fp = sc * at_rho.y[1];
    // G = irr.y * exp(irr.log) = g * exp(-logF)
    double eg = std::exp(irr.log + logF);
    out.w.g = irr.y[0] * eg;
    out.w.gp = irr.y[1] * eg;
    if (!std::isfinite(out.w.g) || !std::isfinite(out.w.f))
        throw SpecfunError("coulomb_wave: scaled values not representable");
    return out;
}

WaveValues coulomb_wave(const CoulombParams& p, double rho)
{
    if (p.eta == 0.0) return riccati_bessel(p.ell, rho);
    return coulomb_wave_scaled(p, rho).unscaled();
}

HankelValues coulomb_hankel(const CoulombParams& p, double rho)
{
    WaveValues w = coulomb_wave(p, rho);
    HankelValues h;
    h.outgoing = {w.g, w.f};
    h.incoming = {w.g, -w.f};
    h.outgoing_deriv = {w.gp, w.fp};
    h.incoming_deriv = {w.gp, -w.fp};
    return h;
}

}  // namespace complab
