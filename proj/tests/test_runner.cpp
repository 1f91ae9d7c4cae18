#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "blk/runner.hpp"

using namespace blk;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string tmpdir(const std::string& tag) {
    const std::string d = (std::filesystem::temp_directory_path() / ("blk_test_" + tag)).string();
    std::filesystem::remove_all(d);
    return d;
}

}  // namespace

TEST_CASE("config: round trip, unknown keys, malformed values") {
    RunConfig c = preset_config("thm63");
    c.nx = 300;
    c.seed = 77;
    const RunConfig back = parse_config_text(serialize_config(c));
    CHECK(back.kind == c.kind);
    CHECK(back.L == c.L);
    CHECK(back.B == c.B);
    CHECK(back.nx == 300);
    CHECK(back.n_modes == c.n_modes);
    CHECK(back.weight_k == c.weight_k);
    CHECK(back.gamma == c.gamma);
    CHECK(back.dt == c.dt);
    CHECK(back.t_end == c.t_end);
    CHECK(back.seed == 77);
    CHECK(back.profile == c.profile);
    CHECK(serialize_config(back) == serialize_config(c));

    try {
        parse_config_text("bogus_key = 1\n");
        FAIL("expected rejection");
    } catch (const invalid_parameter_error& e) {
        CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config_text("nx = twelve\n"), invalid_parameter_error);
    CHECK_THROWS_AS(parse_config_text("nx = 12\nnx = 13\n"), invalid_parameter_error);
    CHECK_THROWS_AS(parse_config_text("nx 12\n"), invalid_parameter_error);

    // preset base + override
    const RunConfig o = parse_config_text("preset = thm61\nnx = 64\n");
    CHECK(o.gamma == 1.0);
    CHECK(o.nx == 64);
    CHECK_THROWS_AS(preset_config("thm99"), invalid_parameter_error);
}

TEST_CASE("preset table embeds the theorem parameter sets") {
    const RunConfig t61 = preset_config("thm61");
    CHECK(t61.kind == "rectangle");
    CHECK(t61.L == doctest::Approx(M_PI));
    CHECK(t61.B == doctest::Approx(M_PI));
    CHECK(t61.gamma == 1.0);
    CHECK(t61.t_end == 2.0);

    const RunConfig t62 = preset_config("thm62");
    CHECK(t62.gamma == -1.0);

    const RunConfig t63 = preset_config("thm63");
    CHECK(t63.kind == "half_strip");
    CHECK(t63.B == doctest::Approx(M_PI / 2.0));
    CHECK(t63.L == doctest::Approx(40.0 * M_PI / 2.0));
    CHECK(t63.weight_k == 0.25);
    CHECK(t63.gamma == 0.125);

    const RunConfig t64 = preset_config("thm64");
    CHECK(t64.gamma == -1.0);
    CHECK(t64.weight_k > 0.0);
    CHECK(t64.weight_k < 0.25);

    const RunConfig un = preset_config("unstable");
    CHECK(un.gamma > 2.0);  // beyond a = 2 on the square
}

TEST_CASE("diagnostics CSV: write/read round trip and version gate") {
    DiagnosticsSeries s;
    for (int i = 0; i < 4; ++i) {
        DiagnosticsRecord r;
        r.t = 0.125 * i;
        r.l2_sq = 1.0 / (1.0 + i);
        r.grad_sq = 0.5 * i;
        r.lap_sq = 0.25;
        r.has_ut = i > 0;
        r.ut_sq = i > 0 ? 0.125 : std::nan("");
        s.records.push_back(r);
    }
    const std::string dir = tmpdir("csv");
    std::filesystem::create_directories(dir);
    const std::string path = dir + "/d.csv";
    write_diagnostics_csv(path, s);
    const DiagnosticsSeries back = read_diagnostics_csv(path);
    REQUIRE(back.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(back[i].t == s[i].t);
        CHECK(back[i].l2_sq == s[i].l2_sq);
        CHECK(back[i].grad_sq == s[i].grad_sq);
        CHECK(back[i].has_ut == s[i].has_ut);
    }

    // version gate
    std::ofstream bad(path);
    bad << "# blk-diagnostics v9\nt\n0\n";
    bad.close();
    CHECK_THROWS_AS(read_diagnostics_csv(path), io_error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("cmd_run writes artifacts and is bit-deterministic") {
    RunConfig cfg = preset_config("thm61");
    cfg.nx = 64;
    cfg.n_modes = 4;
    cfg.dt = 1e-3;
    cfg.t_end = 0.05;
    cfg.diag_every = 10;

    const std::string d1 = tmpdir("run1"), d2 = tmpdir("run2");
    CHECK(cmd_run(cfg, d1) == exit_ok);
    CHECK(cmd_run(cfg, d2) == exit_ok);
    CHECK(std::filesystem::exists(d1 + "/diagnostics.csv"));
    CHECK(std::filesystem::exists(d1 + "/summary.json"));
    CHECK(slurp(d1 + "/diagnostics.csv") == slurp(d2 + "/diagnostics.csv"));
    std::filesystem::remove_all(d1);
    std::filesystem::remove_all(d2);
}

TEST_CASE("cmd_run surfaces blow-up with partial series") {
    RunConfig cfg = preset_config("unstable");
    cfg.nx = 64;
    cfg.n_modes = 4;
    cfg.dt = 5e-4;
    const std::string dir = tmpdir("blow");
    CHECK(cmd_run(cfg, dir) == exit_blowup);
    const DiagnosticsSeries s = read_diagnostics_csv(dir + "/diagnostics.csv");
    CHECK(s.size() >= 1);
    std::filesystem::remove_all(dir);
}

TEST_CASE("cmd_verify_inequalities: sweep, vacuous pass, determinism") {
    const std::string d1 = tmpdir("ineq1"), d2 = tmpdir("ineq2"), d3 = tmpdir("ineq3");
    CHECK(cmd_verify_inequalities(1, 25, d1) == exit_ok);
    CHECK(cmd_verify_inequalities(1, 25, d2) == exit_ok);
    CHECK(slurp(d1 + "/inequalities.json") == slurp(d2 + "/inequalities.json"));
    CHECK(cmd_verify_inequalities(9, 0, d3) == exit_ok);  // vacuous
    std::filesystem::remove_all(d1);
    std::filesystem::remove_all(d2);
    std::filesystem::remove_all(d3);
}

TEST_CASE("cmd_convergence input validation and forced-zero ladder") {
    ConvergenceOptions opts;
    opts.nx_levels = {64};
    CHECK_THROWS_AS(run_convergence_ladder(opts), invalid_parameter_error);

    ConvergenceOptions zero;
    zero.nx_levels = {24, 32, 48};
    zero.dt_levels = {2e-3, 1e-3, 5e-4};
    zero.amplitude = 0.0;
    zero.t_end = 0.02;
    zero.dt_spatial = 1e-3;
    zero.nx_temporal = 32;
    const ConvergenceReport rep = run_convergence_ladder(zero);
    CHECK(rep.pass);
    for (double e : rep.spatial_err) CHECK(e == 0.0);
}

TEST_CASE("cmd_decay rejects non-theorem presets") {
    RunConfig cfg = preset_config("unstable");
    CHECK_THROWS_AS(cmd_decay(cfg, tmpdir("decay_bad")), invalid_parameter_error);
}

TEST_CASE("diagnostics CSV from a real run re-serializes byte-identically") {
    RunConfig cfg = preset_config("thm61");
    cfg.nx = 64;
    cfg.n_modes = 4;
    cfg.dt = 1e-3;
    cfg.t_end = 0.03;
    const std::string dir = tmpdir("reser");
    REQUIRE(cmd_run(cfg, dir) == exit_ok);
    const DiagnosticsSeries s = read_diagnostics_csv(dir + "/diagnostics.csv");
    write_diagnostics_csv(dir + "/again.csv", s);
    CHECK(slurp(dir + "/diagnostics.csv") == slurp(dir + "/again.csv"));
    std::filesystem::remove_all(dir);
}
