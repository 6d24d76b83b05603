#include <doctest.h>

#include "pflow/config.hpp"
#include "pflow/errors.hpp"
#include "pflow/experiments.hpp"
#include "pflow/grid.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pflow;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name)
        : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("empty document yields the documented defaults") {
    RunManifest m = parse_config("", {}, Experiment::solve);
    CHECK(m.safety == 0.9);
    CHECK(m.record_every == 10);
    CHECK(m.eps == 1e-2);
    CHECK(m.datum == "bump");
    CHECK(m.dt == 0.0);
}

TEST_CASE("constraint violations are rejected with line numbers") {
    CHECK_THROWS_WITH_AS(parse_config("p=0.5\n", {}, Experiment::solve),
                         doctest::Contains("p must be >= 1"), ParseError);

    try {
        parse_config("# comment\nbogus_key=3\n", {}, Experiment::solve);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line_number == 2);
        CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_config("eps=oops\n", {}, Experiment::solve), ParseError);
    CHECK_THROWS_AS(parse_config("counts=2\n", {}, Experiment::solve), ParseError);

    // CFL: default box [-4,4], counts 161 -> h = 0.05, bound = 3.125e-4
    CHECK_THROWS_WITH_AS(parse_config("dt=1.0\n", {}, Experiment::solve),
                         doctest::Contains("CFL"), ParseError);
    CHECK_NOTHROW(parse_config("dt=0.0003\n", {}, Experiment::solve));
}

TEST_CASE("overrides take precedence over the document") {
    RunManifest m = parse_config("p=2\nt_end=0.25\n", {"p=3", "eps=0.1"},
                                 Experiment::solve);
    CHECK(m.p == 3.0);
    CHECK(m.eps == 0.1);
    CHECK(m.t_end == 0.25);
    CHECK_THROWS_AS(parse_config("", {"p"}, Experiment::solve), ParseError);
}

TEST_CASE("experiment-specific keys are validated") {
    CHECK_THROWS_AS(parse_config("", {}, Experiment::sweep_p), ParseError);
    CHECK_NOTHROW(parse_config("p_list=1.5,1.25,1.1\ndatum=cone\nkind=dirichlet\n",
                               {}, Experiment::sweep_p));
    CHECK_THROWS_AS(
        parse_config("p_list=1.1,1.5\ndatum=cone\nkind=dirichlet\n", {},
                     Experiment::sweep_p),
        ParseError);
    CHECK_THROWS_AS(parse_config("", {}, Experiment::order_study), ParseError);
    CHECK_NOTHROW(parse_config("h_list=0.2,0.1\ndatum=gp\np=2\nkind=dirichlet\n",
                               {}, Experiment::order_study));
}

TEST_CASE("manifest hash is stable and sensitive") {
    RunManifest a = parse_config("p=2\n", {}, Experiment::solve);
    RunManifest b = parse_config("p=2\n", {}, Experiment::solve);
    RunManifest c = parse_config("p=2.5\n", {}, Experiment::solve);
    CHECK(a.hash() == b.hash());
    CHECK(a.hash() != c.hash());
    CHECK(a.hash().size() == 16);
}

TEST_CASE("solve with t_end = 0 writes the initial snapshot only") {
    TempDir dir("pflow_cli_t0");
    RunManifest m = parse_config("t_end=0\ncounts=33\nbox_lo=-2\nbox_hi=2\n", {},
                                 Experiment::solve);
    CHECK(run_experiment(m, dir.path.string()) == 0);
    CHECK(fs::exists(dir.path / "initial.snap"));
    CHECK_FALSE(fs::exists(dir.path / "final.snap"));

    // round trip: the emitted snapshot reads back bit-identically
    ScalarField sampled = [&] {
        Grid g = m.make_grid();
        return ScalarField::sample(g, [](Vec2 x) {
            const double r2 = x[0] * x[0] + x[1] * x[1];
            return r2 >= 1.0 ? 0.0 : std::exp(1.0 - 1.0 / (1.0 - r2));
        });
    }();
    ScalarField back = read_snapshot_file((dir.path / "initial.snap").string());
    CHECK(back.values() == sampled.values());

    // emitted files start with the manifest hash header
    const std::string text = slurp(dir.path / "initial.snap");
    CHECK(text.rfind("# manifest " + m.hash(), 0) == 0);
}

TEST_CASE("identical manifests produce byte-identical outputs") {
    TempDir dir1("pflow_cli_det1");
    TempDir dir2("pflow_cli_det2");
    RunManifest m = parse_config(
        "t_end=0.05\ncounts=41\nbox_lo=-2\nbox_hi=2\np=2.5\n", {},
        Experiment::solve);
    CHECK(run_experiment(m, dir1.path.string()) == 0);
    CHECK(run_experiment(m, dir2.path.string()) == 0);
    for (const auto& entry : fs::directory_iterator(dir1.path)) {
        const auto other = dir2.path / entry.path().filename();
        REQUIRE(fs::exists(other));
        CHECK(slurp(entry.path()) == slurp(other));
    }
}

TEST_CASE("verify experiment passes on a small bump problem") {
    TempDir dir("pflow_cli_verify");
    RunManifest m = parse_config(
        "counts=81\nbox_lo=-4\nbox_hi=4\nt_end=0.1\np=3\n", {},
        Experiment::verify);
    CHECK(run_experiment(m, dir.path.string()) == 0);
    const std::string report = slurp(dir.path / "report.csv");
    CHECK(report.find("comparison_ordered") != std::string::npos);
    CHECK(report.find("sup_contraction_shift") != std::string::npos);
    CHECK(report.find("false") == std::string::npos);
}

TEST_CASE("steady experiment agrees across the two routes") {
    TempDir dir("pflow_cli_steady");
    RunManifest m = parse_config(
        "datum=saddle\nkind=dirichlet\ncounts=61\nbox_lo=-1\nbox_hi=1\n"
        "p=1.5\nsteady_tol=1e-8\n",
        {}, Experiment::steady);
    CHECK(run_experiment(m, dir.path.string()) == 0);
    CHECK(fs::exists(dir.path / "steady_march.snap"));
    CHECK(fs::exists(dir.path / "steady_relax.snap"));
}


TEST_CASE("sweep-p experiment runs and reports decreasing differences") {
    TempDir dir("pflow_cli_sweep");
    RunManifest m = parse_config(
        "datum=cone\nkind=dirichlet\ncounts=61\nbox_lo=-3\nbox_hi=3\n"
        "eps=1e-3\nt_end=0.1\np_list=1.5,1.25,1.1\n",
        {}, Experiment::sweep_p);
    CHECK(run_experiment(m, dir.path.string()) == 0);
    CHECK(fs::exists(dir.path / "final_p1.5.snap"));
    CHECK(fs::exists(dir.path / "final_p1.1.snap"));
    CHECK(fs::exists(dir.path / "zero_level_radius_p1.1.csv"));
}

TEST_CASE("energy-suite experiment checks all three monotonicity suites") {
    TempDir dir("pflow_cli_energy");
    RunManifest m = parse_config(
        "counts=81\nbox_lo=-4\nbox_hi=4\nt_end=0.4\np=2.5\nstruwe_T=2\n", {},
        Experiment::energy_suite);
    CHECK(run_experiment(m, dir.path.string()) == 0);
    CHECK(fs::exists(dir.path / "energy_regularized.csv"));
    CHECK(fs::exists(dir.path / "energy_p.csv"));
    CHECK(fs::exists(dir.path / "struwe_energy.csv"));
    const std::string report = slurp(dir.path / "energy_report.csv");
    CHECK(report.find("false") == std::string::npos);
}

TEST_CASE("order-study experiment reaches second order") {
    TempDir dir("pflow_cli_order");
    RunManifest m = parse_config(
        "datum=gp\nkind=dirichlet\np=2\neps=1e-6\nbox_lo=-6.025\n"
        "box_hi=5.975\nt_end=1.25\nh_list=0.2,0.1\n",
        {}, Experiment::order_study);
    CHECK(run_experiment(m, dir.path.string()) == 0);
    const std::string csv = slurp(dir.path / "order.csv");
    CHECK(csv.find("h,error") != std::string::npos);
}

TEST_SUITE_END();
