// Acceptance run: one line per criterion. Usage: acceptance [--out DIR] [C1 C2 ...]
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "complab/completeness.hpp"
#include "complab/experiments.hpp"
#include "complab/parallel.hpp"
#include "complab/solver.hpp"
#include "complab/specfun.hpp"

using namespace complab;
namespace fs = std::filesystem;

namespace {

fs::path g_out = fs::temp_directory_path() / "complab_acceptance";

struct Outcome {
    bool passed = true;
    std::string detail;
    void require(bool ok, const std::string& what)
    {
        if (!detail.empty()) detail += "; ";
        detail += what;
        if (!ok) {
            passed = false;
            detail += " [FAIL]";
        }
    }
};

std::string fmt(const char* f, double a, double b = 0)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

// Runs an ini config (benchmark text plus overrides) and folds every check of the report.
RunReport run_config(const std::string& ini, const std::string& tag,
                     const std::vector<std::pair<std::string, std::string>>& overrides = {})
{
    ExperimentConfig cfg = ExperimentConfig::from_string(ini, tag);
    for (const auto& [k, v] : overrides) cfg.set(k, v);
    cfg.set("output.output_dir", (g_out / tag).string());
    return run_experiment(cfg);
}

void fold(Outcome& o, const RunReport& r)
{
    for (const Check& c : r.checks) {
        if (c.criterion.empty()) continue;
        char buf[200];
        std::snprintf(buf, sizeof buf, "%s=%.4g (%s %.4g)", c.name.c_str(), c.measured, c.relation.c_str(),
                      c.threshold);
        o.require(c.passed, buf);
    }
}

Outcome bench(const std::string& name, const std::vector<std::pair<std::string, std::string>>& overrides = {})
{
    Outcome o;
    // Overridden runs get their own directory so the determinism check only compares like with like.
    fold(o, run_config(find_benchmark(name).config, overrides.empty() ? name : name + "-variant", overrides));
    return o;
}

Outcome c1() { return bench("bench-specfun"); }

Outcome c2() { return bench("bench-free"); }

Outcome c3()
{
    Outcome o;
    const std::vector<std::array<double, 3>> cases = {{0, 0.5, 1.0},  {0, -1.0, 2.0}, {1, 2.0, 0.7}, {1, -0.3, 3.0},
                                                      {2, 1.0, 1.5},  {3, -2.0, 1.0}, {4, 0.2, 4.0}, {5, 3.0, 2.5},
                                                      {2, -4.0, 0.8}, {0, 5.0, 1.2}};
    double worst = 0;
    for (const auto& [ell, eta, k] : cases) {
        const PotentialSpec spec = pure_coulomb(2 * k * eta, ell, 1.0);
        const RadialGrid grid = RadialGrid::uniform(30.0, 6000);
        const RadialFunction u = integrate_regular(spec, k * k, grid);
        std::vector<double> F, U;
        for (double r : grid.points)
            if (r >= 0.1) {
                F.push_back(coulomb_wave(CoulombParams{ell, eta}, k * r).f);
                U.push_back(u.at(r));
            }
        double uf = 0, ff = 0, sup_f = 0;
        for (std::size_t i = 0; i < F.size(); ++i) {
            uf += U[i] * F[i];
            ff += F[i] * F[i];
            sup_f = std::max(sup_f, std::abs(F[i]));
        }
        const double scale = uf / ff;
        double d = 0;
        for (std::size_t i = 0; i < F.size(); ++i) d = std::max(d, std::abs(U[i] / scale - F[i]));
        worst = std::max(worst, d / sup_f);
    }
    o.require(worst <= 1e-7, fmt("sup relative |u - F| over 10 (l, eta, k) = %.3g (<= 1e-7)", worst));
    return o;
}

Outcome c4() { return bench("bench-nonlocal"); }

Outcome c5()
{
    Outcome o = bench("bench-eigenmomentum");
    fold(o, run_config(find_benchmark("bench-eigenmomentum").config, "c5-norm-constant",
                       {{"numerics.study", "norm-constant"}}));
    return o;
}

Outcome c6()
{
    Outcome o;
    fold(o, run_config("[potential]\nfamily = pure_coulomb\nVc_strength = 1\nR0_length = 1\n"
                       "[experiment]\nkind = scaling-study\n"
                       "[numerics]\nstudy = spacing\nk_momentum = 2\nR_sequence_length = 20,40,80,160\n",
                       "c6-spacing"));
    return o;
}

Outcome c7()
{
    Outcome o;
    const PotentialSpec sw = square_well(-3, 2);
    const auto g = default_kernel_grid(sw, 20);
    const double a = kernel_box(sw, 20, g, g, 2000, true).max_abs();
    const double b = kernel_box(sw, 20, g, g, 4000, true).max_abs();
    o.require(a < 5e-3 * 2 / M_PI, fmt("max|S_R| at M=2000 = %.4g (< %.4g)", a, 5e-3 * 2 / M_PI));
    o.require(b <= a, fmt("at M=4000 = %.4g (<= M=2000 value)", b));
    return o;
}

Outcome c8()
{
    Outcome o;
    fold(o, run_config("[potential]\nfamily = square_well\ndepth_energy = -3\nR0_length = 2\n"
                       "[experiment]\nkind = kernel-open\n[numerics]\nK_momentum = 200\nN_bound = 1\n",
                       "c8-square-well"));
    fold(o, run_config(find_benchmark("bench-coul-att").config, "bench-coul-att"));
    return o;
}

Outcome c9()
{
    Outcome o = bench("bench-bound-scaling");
    fold(o, run_config("[potential]\nfamily = pure_coulomb\nVc_strength = -2\n"
                       "[experiment]\nkind = scaling-study\n"
                       "[numerics]\nstudy = hydrogenic\nR_sequence_length = 200,400,800\nn_lo = 4\nn_hi = 12\n",
                       "c9-hydrogenic"));
    return o;
}

Outcome c10()
{
    Outcome o;
    fold(o, run_config("[potential]\nfamily = square_well\ndepth_energy = -1\nR0_length = 2\nVc_strength = -2\n"
                       "[experiment]\nkind = lowk-study\n"
                       "[numerics]\nstudy = attractive\nR_sequence_length = 100,200,400\nk_eps_momentum = 0.2\n",
                       "c10-attractive"));
    fold(o, run_config(find_benchmark("bench-coul-rep").config, "bench-coul-rep"));
    fold(o, run_config("[potential]\nfamily = free\nell = 1\nR0_length = 1\n"
                       "[experiment]\nkind = lowk-study\n"
                       "[numerics]\nstudy = exponent\nk_sequence_momentum = 0.2,0.1,0.05\n",
                       "c10-exponent"));
    return o;
}

Outcome c11() { return bench("bench-delta", {{"numerics.K_momentum", "300"}}); }

Outcome c12()
{
    Outcome o = bench("bench-expand");
    fold(o, run_config(find_benchmark("bench-expand").config, "c12-eigenstate", {{"numerics.target", "eigenstate"}}));
    return o;
}

Outcome c13()
{
    Outcome o;
    const long M = 10000, M_oracle = 10000000;
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
        const double x = 0.15 + 0.3 * i, a = -1.5 + 0.15 * i;
        long double direct = 0;
        for (long m = M_oracle; m >= 1; --m) direct += std::sin(m * x + a) / static_cast<long double>(m);
        worst = std::max(worst, std::abs(abel_sum(1.0, x, a, M).accelerated - static_cast<double>(direct)));
    }
    o.require(worst <= 1e-4, fmt("max |accelerated(M=1e4) - direct(1e7)| over 20 samples = %.3g (<= 1e-4)", worst));
    const double saw = abel_sum(1.0, 1.0, 0.0, M).accelerated;
    o.require(std::abs(saw - (M_PI - 1) / 2) <= 1e-6,
              fmt("sawtooth at x=1: |S - (pi-1)/2| = %.3g (<= 1e-6)", std::abs(saw - (M_PI - 1) / 2)));
    return o;
}

Outcome c14()
{
    Outcome o = bench("bench-riemann");
    fold(o, run_config(find_benchmark("bench-normseries").config, "bench-normseries"));
    return o;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Effective config without the output section, which differs between runs by construction.
std::string config_body(const fs::path& dir)
{
    const std::string ini = slurp(dir / "effective_config.ini");
    return ini.substr(0, ini.find("[output]"));
}

Outcome c15()
{
    Outcome o;
    int identical = 0, total = 0;
    for (const Benchmark& b : benchmark_catalog()) {
        std::vector<RunReport> reps;
        for (int w : {1, 4})
            reps.push_back(run_config(b.config, "c15/" + b.name + "-w" + std::to_string(w),
                                      {{"output.workers", std::to_string(w)}}));
        bool same = reps[0].artifacts == reps[1].artifacts;
        for (const std::string& a : reps[0].artifacts) {
            ++total;
            const bool eq = slurp(g_out / "c15" / (b.name + "-w1") / a) == slurp(g_out / "c15" / (b.name + "-w4") / a);
            identical += eq;
            same = same && eq;
        }
        // Compare with the earlier run of the same benchmark when the suite already produced one.
        const fs::path earlier = g_out / b.name;
        if (fs::exists(earlier / "report.csv") &&
            config_body(earlier) == config_body(g_out / "c15" / (b.name + "-w1")))
            for (const std::string& a : reps[0].artifacts) {
                ++total;
                const bool eq = slurp(earlier / a) == slurp(g_out / "c15" / (b.name + "-w1") / a);
                identical += eq;
                same = same && eq;
            }
        o.require(same, b.name + (same ? " identical" : " differs"));
    }
    o.require(identical == total, fmt("%.0f of %.0f CSV comparisons byte-identical", identical, total));
    return o;
}

}  // namespace

int main(int argc, char** argv)
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"C1", c1},   {"C2", c2},   {"C3", c3},   {"C4", c4},   {"C5", c5},
        {"C6", c6},   {"C7", c7},   {"C8", c8},   {"C9", c9},   {"C10", c10},
        {"C11", c11}, {"C12", c12}, {"C13", c13}, {"C14", c14}, {"C15", c15}};
    std::vector<std::string> selected;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--out" && i + 1 < argc) g_out = argv[++i];
        else selected.push_back(a);
    }
    fs::create_directories(g_out);
    workers_from_environment();

    int failures = 0;
    for (const auto& [id, fn] : criteria) {
        if (!selected.empty() && std::find(selected.begin(), selected.end(), id) == selected.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.passed = false;
            o.detail = std::string("error: ") + e.what();
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%-4s %s (%.1f s) %s\n", id.c_str(), o.passed ? "PASS" : "FAIL", s, o.detail.c_str());
        std::fflush(stdout);
        failures += !o.passed;
    }
    return failures == 0 ? 0 : 1;
}
