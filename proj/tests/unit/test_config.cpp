#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "complab/config.hpp"
#include "complab/experiments.hpp"
#include "complab/parallel.hpp"

using namespace complab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("every knob has a default")
{
    const ExperimentConfig cfg;
    for (const Knob& k : knob_catalog()) CHECK_NOTHROW(cfg.text(k.key));
    CHECK(cfg.text("experiment.kind") == "spectrum");
    CHECK(cfg.numbers("numerics.M_sequence") == std::vector<double>{500, 1000, 2000});
}

TEST_CASE("unknown keys are rejected with their name")
{
    try {
        ExperimentConfig::from_string("[potental]\ndepth_energy = -3\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("potental") != std::string::npos);
    }
    CHECK_THROWS_AS(ExperimentConfig::from_string("[numerics]\nR = 20\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_string("kind = spectrum\n"), ConfigError);
}

TEST_CASE("bad values are rejected")
{
    CHECK_THROWS_AS(ExperimentConfig::from_string("[numerics]\nR_length = twenty\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_string("[experiment]\nkind = nope\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_string("[numerics]\naccelerated = yes\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_string("[potential]\nR0_length = -1\n"), ConfigError);
}

TEST_CASE("effective config round-trips")
{
    const ExperimentConfig a = ExperimentConfig::from_string("[potential]\nfamily = pure_coulomb\nVc_strength = 1\n");
    const ExperimentConfig b = ExperimentConfig::from_string(a.effective_ini());
    CHECK(a.effective_ini() == b.effective_ini());
    CHECK(b.number("potential.Vc_strength") == 1);
}

TEST_CASE("benchmark catalog shape")
{
    const auto& cat = benchmark_catalog();
    CHECK(cat.size() >= 8);
    for (const char* n : {"bench-free", "bench-sw1", "bench-coul-att", "bench-coul-rep", "bench-nonlocal"})
        CHECK_NOTHROW(find_benchmark(n));
    for (const Benchmark& b : cat) {
        CHECK(!b.topic.empty());
        CHECK_NOTHROW(ExperimentConfig::from_string(b.config, b.name));
    }
}

TEST_CASE("identical configs give byte-identical CSVs across worker counts")
{
    const fs::path root = fs::temp_directory_path() / "complab_unit_determinism";
    fs::remove_all(root);
    const int saved = workers();
    std::vector<RunReport> reports;
    for (int w : {1, 4}) {
        ExperimentConfig cfg = ExperimentConfig::from_string(find_benchmark("bench-free").config);
        cfg.set("output.output_dir", (root / std::to_string(w)).string());
        cfg.set("output.workers", std::to_string(w));
        reports.push_back(run_experiment(cfg));
    }
    set_workers(saved);
    CHECK(reports[0].passed());
    REQUIRE(reports[0].artifacts == reports[1].artifacts);
    for (const std::string& a : reports[0].artifacts) CHECK(slurp(root / "1" / a) == slurp(root / "4" / a));
    const std::string header = slurp(root / "1" / "report.csv").substr(0, 17);
    CHECK(header == "schema_version,1\n");
    fs::remove_all(root);
}

TEST_CASE("shipped benchmark files match the catalog")
{
    for (const Benchmark& b : benchmark_catalog()) {
        const fs::path p = fs::path(COMPLAB_SOURCE_DIR) / "benchmarks" / (b.name + ".ini");
        REQUIRE(fs::exists(p));
        CHECK(ExperimentConfig::from_file(p.string()).effective_ini() ==
              ExperimentConfig::from_string(b.config).effective_ini());
    }
}
