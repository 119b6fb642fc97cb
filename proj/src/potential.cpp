#include "complab/potential.hpp"

#include <algorithm>
#include <cmath>

#include "complab/quadrature.hpp"

namespace complab {

PotentialSpec free_particle(double ell, double R0)
{
    PotentialSpec s;
    s.ell = ell;
    s.R0 = R0;
    s.local = [](double) { return 0.0; };
    s.local_is_zero = true;
    s.family_tag = "free";
    return s;
}

PotentialSpec square_well(double depth, double R0, double Vc, double ell)
{
    if (!(R0 > 0)) throw PotentialError("square_well: R0 must be positive");
    PotentialSpec s;
    s.ell = ell;
    s.Vc = Vc;
    s.R0 = R0;
    s.local = [depth](double) { return depth; };
    s.local_is_zero = depth == 0.0;
    s.family_tag = "square_well";
    return s;
}

PotentialSpec woods_saxon(double depth, double radius, double diffuseness, double R0, double Vc, double ell)
{
    if (!(diffuseness > 0)) throw PotentialError("woods_saxon: diffuseness must be positive");
    PotentialSpec s;
    s.ell = ell;
    s.Vc = Vc;
    s.R0 = R0;
    s.local = [=](double r) { return depth / (1.0 + std::exp((r - radius) / diffuseness)); };
    s.family_tag = "woods_saxon";
    return s;
}

PotentialSpec pure_coulomb(double Vc, double ell, double R0)
{
    PotentialSpec s;
    s.ell = ell;
    s.Vc = Vc;
    s.R0 = R0;
    s.local = [Vc](double r) { return Vc / r; };
    s.origin_coulomb = Vc;
    s.local_is_zero = Vc == 0.0;
    s.family_tag = "pure_coulomb";
    return s;
}

PotentialSpec gaussian_nonlocal(double strength, double width, double R0, double ell, double Vc)
{
    if (!(width > 0)) throw PotentialError("gaussian_nonlocal: width must be positive");
    PotentialSpec s = free_particle(ell, R0);
    s.Vc = Vc;
    const double norm = std::pow(R0, ell + 2.0);
    s.nonlocal = [=](double r, double rp) {
        if (r < 0 || rp < 0 || r > R0 || rp > R0) return 0.0;
        double gr = std::pow(r, ell + 1.0) * (R0 - r) / norm;
        double gp = std::pow(rp, ell + 1.0) * (R0 - rp) / norm;
        double d = (r - rp) / width;
        return strength * std::exp(-d * d) * gr * gp;
    };
    s.family_tag = "gaussian_nonlocal";
    return s;
}

PotentialSpec composite(const std::vector<PotentialSpec>& parts)
{
    if (parts.empty()) throw PotentialError("composite: no parts");
    PotentialSpec s;
    s.ell = parts[0].ell;
    s.Vc = parts[0].Vc;
    s.R0 = parts[0].R0;
    s.nystrom_nodes = parts[0].nystrom_nodes;
    std::vector<std::function<double(double)>> locals;
    std::vector<std::function<double(double, double)>> nonlocals;
    s.local_is_zero = true;
    s.family_tag = "composite(";
    for (size_t i = 0; i < parts.size(); ++i) {
        const auto& p = parts[i];
        if (p.ell != s.ell || p.Vc != s.Vc || p.R0 != s.R0)
            throw PotentialError("composite: parts must share ell, Vc and R0");
        if (!p.local_is_zero) {
            locals.push_back(p.local);
            s.local_is_zero = false;
        }
        if (p.has_nonlocal()) nonlocals.push_back(p.nonlocal);
        s.origin_coulomb += p.origin_coulomb;
        s.breakpoints.insert(s.breakpoints.end(), p.breakpoints.begin(), p.breakpoints.end());
        s.family_tag += (i ? "+" : "") + p.family_tag;
    }
    s.family_tag += ")";
    // every part carries the same Coulomb tail; only one of them may also carry it at the origin
    std::sort(s.breakpoints.begin(), s.breakpoints.end());
    s.breakpoints.erase(std::unique(s.breakpoints.begin(), s.breakpoints.end()), s.breakpoints.end());
    s.local = [locals](double r) {
        double v = 0;
        for (const auto& f : locals) v += f(r);
        return v;
    };
    if (!nonlocals.empty())
        s.nonlocal = [nonlocals](double r, double rp) {
            double w = 0;
            for (const auto& f : nonlocals) w += f(r, rp);
            return w;
        };
    return s;
}

double eval_local(const PotentialSpec& spec, double r)
{
    if (r < 0) throw PotentialError("eval_local: negative radius");
    if (r > spec.R0) return spec.Vc / r;
    if (r == 0.0 && spec.origin_coulomb != 0.0)
        throw PotentialError("eval_local: potential is singular at r = 0");
    return spec.local(r);
}

double eval_nonlocal(const PotentialSpec& spec, double r, double rp)
{
    if (!spec.has_nonlocal() || r > spec.R0 || rp > spec.R0) return 0.0;
    return spec.nonlocal(r, rp);
}

namespace {

std::vector<double> pieces(const PotentialSpec& spec, double a, double b)
{
    std::vector<double> cuts{a};
    for (double x : spec.breakpoints)
        if (x > a && x < b) cuts.push_back(x);
    cuts.push_back(b);
    return cuts;
}

}  // namespace

double integrated_potential(const PotentialSpec& spec, double r)
{
    if (r < 0) throw PotentialError("integrated_potential: negative radius");
    const double top = std::min(r, spec.R0);
    double total = 0;
    if (!spec.local_is_zero && top > 0) {
        const double c = spec.origin_coulomb;
        auto f = [&](double x) { return c != 0.0 ? spec.local(x) - c / x : spec.local(x); };
        auto cuts = pieces(spec, 0.0, top);
        for (size_t i = 0; i + 1 < cuts.size(); ++i) {
            try {
                total += integrate_adaptive(f, cuts[i], cuts[i + 1], 1e-10);
            } catch (const std::runtime_error& e) {
                throw PotentialError(std::string("integrated_potential: v is not integrable to tolerance: ") + e.what());
            }
        }
    }
    if (r > spec.R0) total += (spec.Vc - spec.origin_coulomb) * std::log(r / spec.R0);
    return total;
}

double max_positive_local(const PotentialSpec& spec)
{
    if (spec.local_is_zero) return 0.0;
    double m = 0.0;
    const int n = 4000;
    for (int i = 0; i <= n; ++i) {
        double r = spec.R0 * (i + 0.5) / (n + 1);
        m = std::max(m, spec.local(r));
    }
    for (double b : spec.breakpoints) {
        m = std::max(m, spec.local(std::max(0.0, b - 1e-12)));
        m = std::max(m, spec.local(std::min(spec.R0, b + 1e-12)));
    }
    m = std::max(m, spec.local(spec.R0));
    return m;
}

double k_min(const PotentialSpec& spec) { return std::sqrt(2.0 * max_positive_local(spec)) + 1.0; }

bool ValidationReport::ok() const
{
    return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

const ValidationCheck* ValidationReport::find(const std::string& name) const
{
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

ValidationReport validate(const PotentialSpec& spec)
{
    ValidationReport rep;
    {
        ValidationCheck c{"parameters", spec.ell >= -0.5 && spec.R0 > 0 && static_cast<bool>(spec.local), 0, ""};
        if (!c.passed) c.detail = "need ell >= -1/2, R0 > 0 and a local part";
        rep.checks.push_back(c);
        if (!c.passed) return rep;
    }
    {
        double worst = 0;
        for (int i = 1; i <= 200; ++i) {
            double r = spec.R0 * (1.0 + 0.05 * i);
            worst = std::max(worst, std::abs(eval_local(spec, r) * r - spec.Vc));
        }
        rep.checks.push_back({"coulomb_tail", worst <= 1e-12 * std::max(1.0, std::abs(spec.Vc)), worst, ""});
    }
    {
        const double below = spec.local(spec.R0);
        const double jump = spec.Vc / spec.R0 - below;
        rep.checks.push_back({"jump_at_R0", std::isfinite(jump), std::abs(jump),
                              "finite discontinuity at R0 (allowed)"});
    }
    {
        ValidationCheck c{"local_integrable", true, 0, ""};
        try {
            double coarse = 0, fine = 0;
            const double a = spec.origin_coulomb != 0.0 ? 0.0 : 0.0;
            auto f = [&](double x) {
                return std::abs(spec.origin_coulomb != 0.0 ? spec.local(x) - spec.origin_coulomb / x : spec.local(x));
            };
            auto cuts = pieces(spec, a, spec.R0);
            for (size_t i = 0; i + 1 < cuts.size(); ++i) {
                coarse += integrate_adaptive(f, cuts[i], cuts[i + 1], 1e-6);
                fine += integrate_adaptive(f, cuts[i], cuts[i + 1], 1e-10);
            }
            c.residual = std::abs(fine - coarse);
            c.passed = std::isfinite(fine) && c.residual < 1e-5;
        } catch (const std::exception& e) {
            c.passed = false;
            c.detail = e.what();
        }
        rep.checks.push_back(c);
    }
    if (spec.has_nonlocal()) {
        const int n = 50;
        double sym = 0, edge = 0, scale = 0, origin = 0;
        for (int i = 0; i < n; ++i) {
            double r = spec.R0 * (i + 0.5) / n;
            for (int j = 0; j < n; ++j) {
                double rp = spec.R0 * (j + 0.5) / n;
                double a = spec.nonlocal(r, rp), b = spec.nonlocal(rp, r);
                sym = std::max(sym, std::abs(a - b));
                scale = std::max(scale, std::abs(a));
            }
            edge = std::max(edge, std::abs(spec.nonlocal(spec.R0, r)));
            edge = std::max(edge, std::abs(spec.nonlocal(r, spec.R0)));
            // w(r, r') / r^(l+1) should approach a finite limit at the origin
            double e1 = 1e-4 * spec.R0, e2 = 2e-4 * spec.R0;
            double q1 = spec.nonlocal(e1, r) / std::pow(e1, spec.ell + 1.0);
            double q2 = spec.nonlocal(e2, r) / std::pow(e2, spec.ell + 1.0);
            double denom = std::max({std::abs(q1), std::abs(q2), 1e-300});
            if (std::abs(q1) > 1e-300 || std::abs(q2) > 1e-300) origin = std::max(origin, std::abs(q1 - q2) / denom);
        }
        rep.checks.push_back({"nonlocal_symmetry", sym <= 1e-12 * std::max(1.0, scale), sym, ""});
        rep.checks.push_back({"nonlocal_boundary_R0", edge <= 1e-10 * std::max(1.0, scale), edge, ""});
        rep.checks.push_back({"nonlocal_origin_power", origin <= 1e-2, origin, "w ~ w(0,r') r^(l+1) near r = 0"});
    }
    return rep;
}

}  // namespace complab
