#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "ccs/config.hpp"
#include "ccs/driver.hpp"
#include "ccs/io.hpp"
#include "ccs/presets.hpp"
#include "oracles.hpp"

using namespace ccs;

namespace {
std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return std::string(std::istreambuf_iterator<char>(in), {});
}
}  // namespace

TEST_CASE("17-digit formatting round-trips doubles exactly") {
    oracles::Rng rng(2);
    for (int i = 0; i < 200; ++i) {
        const double v = rng.uniform(-1.0, 1.0) * std::pow(10.0, rng.uniform(-12.0, 12.0));
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(std::stod(format_double(0.1)) == 0.1);
}

TEST_CASE("checkpoint JSON round-trips the state bit-exactly") {
    oracles::Rng rng(3);
    CcsState st;
    st.t = 1.2345678901234567;
    st.basis.resize(3, 5);
    for (int l = 0; l < 5; ++l) st.basis.col(l) = rng.random_displacement(3, 1.3);
    st.amplitudes = rng.random_displacement(5, 0.7);

    const std::string path = "/tmp/ccs_io_checkpoint.json";
    save_checkpoint(path, st);
    const CcsState back = load_checkpoint(path);
    CHECK(back.t == st.t);
    CHECK((back.basis - st.basis).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.amplitudes - st.amplitudes).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("basis dump and reload are exact") {
    oracles::Rng rng(5);
    MatrixXcd Z(4, 7);
    for (int l = 0; l < 7; ++l) Z.col(l) = rng.random_displacement(4, 0.9);
    const std::string path = "/tmp/ccs_io_basis.txt";
    write_text_file(path, basis_to_text(Z));
    const MatrixXcd back = basis_from_text_file(path);
    CHECK(back.rows() == 4);
    CHECK(back.cols() == 7);
    CHECK((back - Z).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("series CSV carries the documented column layout") {
    ObservableSeries s;
    s.n_bath = 2;
    s.times = {0.0};
    s.norm = {1.0};
    s.e_total = {0.8};
    s.e_system = {0.3};
    s.e_interaction = {0.0};
    s.e_counter = {0.05};
    s.e_bath = {VectorXd::Constant(2, 0.2)};
    s.c_s = {1.0};
    s.condition = {12.0};
    s.clamp_counts = {0};
    const std::string csv = series_csv(s);
    CHECK(csv.find("t,norm,e_total,e_system,e_interaction,e_counter,e_bath_1,e_bath_2,c_s,"
                   "condition,clamps")
          == 0);
    CHECK(csv.find("\n0,1,0.80000000000000004,0.29999999999999999,0,0.05") != std::string::npos);
}

TEST_CASE("config parsing applies defaults and flags unknown keys") {
    const json minimal = json::parse(R"({"model": {"f": 2, "f_co": 10}})");
    const RunConfig cfg = parse_run_config(minimal);
    CHECK(cfg.model.f == 2);
    CHECK(cfg.model.a == 2.0);
    CHECK(cfg.sampler.M == 299);
    CHECK(cfg.integrator.dt == 0.005);
    CHECK(cfg.engine == "ccs");

    const json bad_key = json::parse(R"({"model": {"f": 2, "f_co": 10, "mass": 1.0}})");
    CHECK_THROWS_WITH_AS(parse_run_config(bad_key), doctest::Contains("mass"),
                         std::invalid_argument);

    const json bad_value = json::parse(R"({"sampler": {"M": "many"}})");
    CHECK_THROWS_WITH_AS(parse_run_config(bad_value), doctest::Contains("M"),
                         std::invalid_argument);

    const json bad_section = json::parse(R"({"propagator": {}})");
    CHECK_THROWS_WITH_AS(parse_run_config(bad_section), doctest::Contains("propagator"),
                         std::invalid_argument);

    const json bad_engine = json::parse(R"({"engine": "exact"})");
    CHECK_THROWS_AS(parse_run_config(bad_engine), std::invalid_argument);

    const json so_big_f = json::parse(R"({"engine": "splitop", "model": {"f": 4, "f_co": 14}})");
    CHECK_THROWS_AS(parse_run_config(so_big_f), std::invalid_argument);
}

TEST_CASE("resolved config echo round-trips") {
    const json j = json::parse(R"({
        "engine": "both",
        "model": {"f": 2, "f_co": 10, "g": 0.2},
        "sampler": {"M": 33, "seed": 77},
        "integrator": {"dt": 0.02, "t_final": 1.0},
        "observables": {"t_average": 0.5}
    })");
    const RunConfig cfg = parse_run_config(j);
    const json echo = resolved_config_json(cfg);
    const RunConfig again = parse_run_config(echo);
    CHECK(resolved_config_json(again) == echo);
    CHECK(again.model.g == 0.2);
    CHECK(again.sampler.seed == 77);
    CHECK(again.observables.t_average.has_value());
}

TEST_CASE("every preset parses into a valid configuration") {
    for (const auto& [name, preset] : presets()) {
        CAPTURE(name);
        const RunConfig cfg = parse_run_config(preset.config);
        CHECK(!cfg.output_dir.empty());
        CHECK_NOTHROW(build_model(cfg.model));
    }
}

TEST_CASE("identical config and seed produce byte-identical artifacts") {
    json j = json::parse(R"({
        "engine": "ccs",
        "model": {"f": 1, "f_co": 8},
        "sampler": {"M": 25, "seed": 4242},
        "integrator": {"dt": 0.01, "t_final": 0.5, "record_stride": 10},
        "observables": {"record_density": true}
    })");
    RunConfig cfg = parse_run_config(j);
    cfg.output_dir = "/tmp/ccs_repro_a";
    execute_run(cfg);
    cfg.output_dir = "/tmp/ccs_repro_b";
    execute_run(cfg);
    for (const char* name : {"ccs_series.csv", "basis.txt", "ccs_density.csv",
                             "resolved_config.json", "final_state.json"}) {
        CAPTURE(name);
        CHECK(slurp(std::string("/tmp/ccs_repro_a/") + name)
              == slurp(std::string("/tmp/ccs_repro_b/") + name));
    }
}

TEST_CASE("sweep emits one row per point and survives per-point failure") {
    json j = json::parse(R"({
        "engine": "ccs",
        "model": {"f": 0},
        "sampler": {"M": 15, "seed": 9},
        "integrator": {"dt": 0.01, "t_final": 0.3, "record_stride": 10}
    })");
    RunConfig cfg = parse_run_config(j);
    cfg.output_dir = "/tmp/ccs_sweep_test";
    std::filesystem::remove_all(cfg.output_dir);
    // f=1 has no Table-II entry and f_co defaults to 0: that point must fail
    // while the others proceed.
    const auto rows = run_sweep(cfg, {0, 1, 2}, 2);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].ok);
    CHECK(!rows[1].ok);
    CHECK(!rows[1].error.empty());
    CHECK(rows[2].ok);
    CHECK(rows[0].avg_energy_ccs == doctest::Approx(0.296875).epsilon(1e-3));
    CHECK(rows[2].avg_energy_ccs < rows[0].avg_energy_ccs);

    const std::string log = slurp("/tmp/ccs_sweep_test/sweep_rows.csv");
    CHECK(log.find("failed") != std::string::npos);
    const std::string final_csv = slurp("/tmp/ccs_sweep_test/sweep.csv");
    CHECK(final_csv.find(sweep_header_csv()) == 0);
}

TEST_CASE("density CSV rows carry the grid header and one frame per time") {
    ObservableSeries s;
    s.density_x = VectorXd::LinSpaced(3, -1.0, 1.0);
    s.density_times = {0.0, 0.5};
    s.density_frames = {VectorXd::Constant(3, 0.25), VectorXd::Constant(3, 0.5)};
    const std::string csv = density_csv(s);
    CHECK(csv.find("t,-1,0,1\n") == 0);
    CHECK(csv.find("\n0.5,0.5,0.5,0.5\n") != std::string::npos);
}
