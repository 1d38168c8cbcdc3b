#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cogrelay/config.hpp"
#include "cogrelay/csv.hpp"

using namespace cogrelay;
using config::SystemConfig;

TEST_CASE("defaults reproduce the reference parameter set") {
    const SystemConfig cfg;
    cfg.validate();
    CHECK(cfg.p_pt_watts() == doctest::Approx(31.6227766017).epsilon(1e-10));
    CHECK(cfg.n0_watts() == doctest::Approx(1e-9).epsilon(1e-12));
    CHECK(cfg.theta_p() == doctest::Approx(std::exp2(0.4) - 1.0).epsilon(1e-15));
    CHECK(cfg.gamma_s() == doctest::Approx(std::exp2(0.4) - 1.0).epsilon(1e-15));
    CHECK(cfg.r_p == 0.4);
    CHECK(cfg.r_s == 0.2);
    CHECK(cfg.topology.path_loss_exponent == 4.0);
    CHECK(cfg.m_f == 2);
    CHECK(cfg.m_int == 1);
    CHECK(cfg.relays == 3);
    const auto ls = cfg.links();
    CHECK(ls.pt_pd.m == 2);  // primary link defaults to the forward class
    CHECK(ls.pt_pd.omega == doctest::Approx(1.6e-7).epsilon(1e-12));
}

TEST_CASE("dB conventions") {
    SystemConfig cfg;
    cfg.p_pt_db_unit = "dBm";
    CHECK(cfg.p_pt_watts() == doctest::Approx(0.0316227766017).epsilon(1e-10));
    cfg.p_pt_db_unit = "dBW";
    cfg.p_pt_db = 0.0;
    CHECK(cfg.p_pt_watts() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("empty config text keeps all defaults") {
    SystemConfig cfg;
    config::apply_config_text(cfg, "", "inline");
    cfg.validate();
    const SystemConfig ref;
    CHECK(cfg.canonical_dump() == ref.canonical_dump());
}

TEST_CASE("sectioned key-value parsing with comments and overrides") {
    SystemConfig cfg;
    config::apply_config_text(cfg,
                              "# comment line\n"
                              "[fading]\n"
                              "m_f = 3   ; trailing comment\n"
                              "m_int=2\n"
                              "\n"
                              "[energy]\n"
                              "h_av = 4.5\n"
                              "relays = 5\n"
                              "[sweep]\n"
                              "mode = min-rule\n",
                              "inline");
    cfg.validate();
    CHECK(cfg.m_f == 3);
    CHECK(cfg.m_int == 2);
    CHECK(cfg.h_av == 4.5);
    CHECK(cfg.relays == 5);
    CHECK(cfg.mode == "min-rule");
}

TEST_CASE("unknown keys are named in the error") {
    SystemConfig cfg;
    try {
        config::apply_config_text(cfg, "[fading]\nm_typo = 3\n", "inline");
        FAIL("expected an exception");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("fading.m_typo") != std::string::npos);
    }
    CHECK_THROWS_AS(config::apply_config_text(cfg, "[nosuch]\nx = 1\n", "inline"),
                    std::invalid_argument);
    CHECK_THROWS_AS(config::apply_config_text(cfg, "m_f = 3\n", "inline"),
                    std::invalid_argument);  // key before any section
    CHECK_THROWS_AS(config::apply_config_text(cfg, "[fading]\nm_f: 3\n", "inline"),
                    std::invalid_argument);  // not key = value
}

TEST_CASE("malformed values are rejected with the key name") {
    SystemConfig cfg;
    try {
        config::apply_config_text(cfg, "[energy]\nh_av = fast\n", "inline");
        FAIL("expected an exception");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("energy.h_av") != std::string::npos);
    }
    CHECK_THROWS_AS(config::apply_config_text(cfg, "[fading]\nm_f = 2.5\n", "inline"),
                    std::invalid_argument);
}

TEST_CASE("validation names the offending key") {
    SystemConfig cfg;
    cfg.m_f = 0;
    try {
        cfg.validate();
        FAIL("expected an exception");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("fading.m_f") != std::string::npos);
    }

    SystemConfig grid;
    grid.theta_max = 1.0;
    CHECK_THROWS_AS(grid.validate(), std::invalid_argument);
    grid.theta_max = 0.5;
    grid.theta_min = 0.6;
    CHECK_THROWS_AS(grid.validate(), std::invalid_argument);
    grid.theta_min = -0.1;
    CHECK_THROWS_AS(grid.validate(), std::invalid_argument);

    SystemConfig mode;
    mode.mode = "turbo";
    CHECK_THROWS_AS(mode.validate(), std::invalid_argument);
}

TEST_CASE("theta grid construction") {
    SystemConfig cfg;
    cfg.theta_min = 0.001;
    cfg.theta_max = 0.01;
    cfg.theta_steps = 10;
    const auto grid = cfg.theta_grid();
    REQUIRE(grid.size() == 10);
    CHECK(grid.front() == 0.001);
    CHECK(grid.back() == 0.01);
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);

    cfg.theta_steps = 1;
    CHECK(cfg.theta_grid() == std::vector<double>{0.001});
}

TEST_CASE("load_config reads files and reports missing ones") {
    const std::string path = "test_config_tmp.ini";
    {
        std::ofstream f(path);
        f << "[energy]\nrelays = 4\n[simulation]\nseed = 99\n";
    }
    const auto cfg = config::load_config(path);
    CHECK(cfg.relays == 4);
    CHECK(cfg.seed == 99);
    std::remove(path.c_str());
    CHECK_THROWS_AS((void)config::load_config("no_such_file.ini"), std::runtime_error);
}

TEST_CASE("config hash is stable and sensitive") {
    const SystemConfig a;
    SystemConfig b;
    CHECK(a.hash_hex() == b.hash_hex());
    b.seed = 999;
    CHECK(a.hash_hex() != b.hash_hex());
}

TEST_CASE("pt_pd severity class knob") {
    SystemConfig cfg;
    cfg.pt_pd_class = "mint";
    CHECK(cfg.links().pt_pd.m == cfg.m_int);
    cfg.pt_pd_class = "mf";
    CHECK(cfg.links().pt_pd.m == cfg.m_f);
}

TEST_CASE("csv number formatting and quoting") {
    CHECK(csv::format_number(0.5) == "0.5");
    CHECK(csv::format_number(1.0 / 3.0) == "0.333333333333");  // 12 significant digits
    CHECK(csv::format_number(1.6e-7) == "1.6e-07");
    CHECK(csv::quote("plain") == "plain");
    CHECK(csv::quote("a,b") == "\"a,b\"");
    CHECK(csv::quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("curve CSV layout") {
    std::vector<sim::SweepRow> rows(2);
    rows[0].theta_cap = 0.001;
    rows[0].status = sim::RowStatus::infeasible;
    rows[1].theta_cap = 0.002;
    rows[1].p_st = 10.0;
    rows[1].p_sr = 5.0;
    rows[1].p_effective = 5.0;
    rows[1].omega = 0.8;
    rows[1].eta = 1.0;
    rows[1].psout_analytic = 0.125;
    rows[1].psout_sim = 0.124;
    rows[1].ci_halfwidth = 0.001;
    rows[1].n_active_mean = 3.0;

    std::ostringstream out;
    csv::write_curve(out, rows, 42, "deadbeef00000000");
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "# cogrelay curve");
    std::getline(in, line);
    CHECK(line == "# seed=42 config_hash=deadbeef00000000");
    std::getline(in, line);
    CHECK(line == std::string(csv::kCurveHeader));
    std::getline(in, line);
    CHECK(line == "0.001,,,,,,,,,,infeasible");
    std::getline(in, line);
    CHECK(line == "0.002,10,5,5,0.8,1,0.125,0.124,0.001,3,ok");
}
