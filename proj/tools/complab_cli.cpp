#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "complab/experiments.hpp"
#include "complab/specfun.hpp"

namespace {

int report_and_exit(const complab::RunReport& report)
{
    std::cout << report.to_text();
    return report.passed() ? 0 : 1;
}

void print(double x) { std::printf("%.17g\n", x); }

int probe(const std::string& fn, const std::vector<double>& a)
{
    using namespace complab;
    auto need = [&](std::size_t n, const char* usage) {
        if (a.size() != n) throw CLI::ValidationError("specfun-probe " + fn, std::string("expects ") + usage);
    };
    if (fn == "coulomb") {
        need(3, "<ell> <eta> <rho>");
        const WaveValues w = coulomb_wave(CoulombParams{a[0], a[1]}, a[2]);
        std::printf("F %.17g\nFp %.17g\nG %.17g\nGp %.17g\nwronskian %.17g\n", w.f, w.fp, w.g, w.gp,
                    w.fp * w.g - w.f * w.gp);
    } else if (fn == "coulomb-scaled") {
        need(3, "<ell> <eta> <rho>");
        const ScaledWave s = coulomb_wave_scaled(CoulombParams{a[0], a[1]}, a[2]);
        std::printf("F %.17g\nFp %.17g\nG %.17g\nGp %.17g\nlog_scale %.17g\n", s.w.f, s.w.fp, s.w.g, s.w.gp,
                    s.log_scale);
    } else if (fn == "riccati") {
        need(2, "<ell> <x>");
        const WaveValues w = riccati_bessel(a[0], a[1]);
        std::printf("f %.17g\nfp %.17g\ng %.17g\ngp %.17g\n", w.f, w.fp, w.g, w.gp);
    } else if (fn == "bessel-zeros") {
        need(3, "<ell> <R> <count>");
        for (double z : bessel_zeros(a[0], a[1], static_cast<int>(a[2]))) print(z);
    } else if (fn == "si") {
        need(1, "<x>");
        print(sine_integral(a[0]));
    } else if (fn == "ci") {
        need(1, "<x>");
        print(cosine_integral(a[0]));
    } else if (fn == "digamma") {
        need(1, "<x>");
        print(digamma(a[0]));
    } else if (fn == "turning-point") {
        need(2, "<ell> <eta>");
        print(coulomb_turning_point(a[0], a[1]));
    } else {
        throw CLI::ValidationError("specfun-probe",
                                   "unknown function '" + fn +
                                       "' (coulomb, coulomb-scaled, riccati, bessel-zeros, si, ci, digamma, "
                                       "turning-point)");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Completeness experiments for the radial Schroedinger equation"};
    app.require_subcommand(1);

    std::string config_path, output_dir;
    std::vector<std::string> overrides;
    auto* run = app.add_subcommand("run", "run an experiment from an ini config");
    run->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);
    run->add_option("-o,--output", output_dir, "override output.output_dir");
    run->add_option("-s,--set", overrides, "override a knob: section.key=value");

    std::string bench_name;
    auto* bench = app.add_subcommand("bench", "run a shipped benchmark");
    bench->add_option("name", bench_name, "benchmark name (see list)")->required();
    bench->add_option("-o,--output", output_dir, "output directory (default out/<name>)");
    bench->add_option("-s,--set", overrides, "override a knob: section.key=value");

    auto* list = app.add_subcommand("list", "list shipped benchmarks");

    std::string fn;
    std::vector<double> fn_args;
    auto* sp = app.add_subcommand("specfun-probe", "evaluate one special function");
    sp->add_option("fn", fn, "coulomb | coulomb-scaled | riccati | bessel-zeros | si | ci | digamma | turning-point")
        ->required();
    sp->add_option("args", fn_args, "numeric arguments");

    CLI11_PARSE(app, argc, argv);

    try {
        auto apply = [&](complab::ExperimentConfig& cfg) {
            for (const std::string& o : overrides) {
                const auto eq = o.find('=');
                if (eq == std::string::npos) throw complab::ConfigError("--set expects section.key=value, got '" + o + "'");
                cfg.set(o.substr(0, eq), o.substr(eq + 1));
            }
            if (!output_dir.empty()) cfg.set("output.output_dir", output_dir);
        };
        if (*run) {
            complab::ExperimentConfig cfg = complab::ExperimentConfig::from_file(config_path);
            apply(cfg);
            return report_and_exit(complab::run_experiment(cfg));
        }
        if (*bench) {
            const complab::Benchmark& b = complab::find_benchmark(bench_name);
            complab::ExperimentConfig cfg = complab::ExperimentConfig::from_string(b.config, b.name);
            cfg.set("output.output_dir", "out/" + b.name);
            apply(cfg);
            return report_and_exit(complab::run_experiment(cfg));
        }
        if (*list) {
            for (const complab::Benchmark& b : complab::benchmark_catalog())
                std::printf("%-20s [%s] %s\n", b.name.c_str(), b.topic.c_str(), b.description.c_str());
            return 0;
        }
        if (*sp) return probe(fn, fn_args);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const complab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
