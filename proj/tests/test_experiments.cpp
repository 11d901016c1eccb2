#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "rewet/errors.hpp"
#include "rewet/experiments.hpp"

using namespace rewet;

namespace {

Scenario make_scenario(const std::string& id, const std::string& preset_name,
                       int grid_n = 50) {
    Scenario s;
    s.id = id;
    s.base = preset(preset_name);
    s.grid_n = grid_n;
    return s;
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& content) {
        path = std::string("/tmp/rewet_test_") + std::to_string(rand()) + ".cfg";
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("resolved_params applies overrides in order") {
    Scenario s = make_scenario("x", "base");
    s.overrides = {{"k_alpha", "11.1"}, {"k_alpha", "2.5"}, {"L", "5"}};
    ParameterSet p = s.resolved_params();
    CHECK(p.k_alpha == doctest::Approx(2.5));
    CHECK(p.L == doctest::Approx(5.0));
}

TEST_CASE("run_scenario produces a complete, deterministic result") {
    Scenario s = make_scenario("base_small", "base");
    ScenarioResult r = run_scenario(s);
    REQUIRE_FALSE(r.failed);
    CHECK(r.id == "base_small");
    CHECK(r.grid_n == 50);
    REQUIRE(r.profiles.size() == 10);
    for (const auto& snap : r.profiles) {
        CHECK(snap.theta.size() == 50);  // snapshot grid matches scenario grid
        CHECK(snap.phi.size() == 50);
    }
    CHECK(r.front.times.size() >= 200);
    for (size_t k = 1; k < r.front.times.size(); ++k)
        CHECK(r.front.times[k] > r.front.times[k - 1]);
    CHECK(r.s_final > 0.0);
    CHECK(r.s_final < preset("base").L);
    CHECK(r.trace.accepted > 0);

    ScenarioResult r2 = run_scenario(s);
    CHECK(r2.s_final == r.s_final);  // bitwise determinism
    CHECK(r2.profiles.back().theta == r.profiles.back().theta);
}

TEST_CASE("front_at interpolates the sampled trajectory") {
    ScenarioResult r;
    r.front.times = {0.0, 1.0, 2.0};
    r.front.positions = {0.0, 2.0, 3.0};
    CHECK(r.front_at(0.5) == doctest::Approx(1.0));
    CHECK(r.front_at(1.5) == doctest::Approx(2.5));
    CHECK(r.front_at(2.0) == doctest::Approx(3.0));
}

TEST_CASE("no-reaction run follows the sqrt-t law") {
    Scenario s = make_scenario("nr", "no_reaction");
    ScenarioResult r = run_scenario(s);
    REQUIRE_FALSE(r.failed);
    SqrtFit fit = sqrt_time_fit(r.front, 0.0, 28.0);
    CHECK(fit.r_squared >= 0.995);
    CHECK(fit.slope > 0.0);
}

TEST_CASE("base run stalls inside the sample") {
    Scenario s = make_scenario("base", "base");
    ScenarioResult r = run_scenario(s);
    REQUIRE_FALSE(r.failed);
    double s28 = r.front_at(28.0), s14 = r.front_at(14.0);
    CHECK(s28 > 0.0);
    CHECK(s28 < preset("base").L);
    CHECK(s28 - s14 <= 0.05 * s28);
}

TEST_CASE("decoupled porosity matches the reaction-free front") {
    ScenarioResult nr = run_scenario(make_scenario("nr", "no_reaction", 100));
    ScenarioResult dp = run_scenario(make_scenario("dp", "decoupled_porosity", 100));
    REQUIRE_FALSE(nr.failed);
    REQUIRE_FALSE(dp.failed);
    CHECK(std::abs(dp.s_final - nr.s_final) <= 0.01 * preset("base").L);
    // ...while still producing a significant amount of gel
    double max_cg = 0.0;
    for (double v : dp.final_profile().C_g) max_cg = std::max(max_cg, v);
    CHECK(max_cg > 0.01);
}

TEST_CASE("sweep over k_alpha: monotone front ordering, labeled results") {
    Scenario base = make_scenario("kalpha", "base");
    std::vector<double> values = {0.0, 2.22, 22.2, 222.0};
    auto results = sweep(base, "k_alpha", values);
    REQUIRE(results.size() == 4);
    for (size_t i = 0; i < results.size(); ++i) {
        REQUIRE_FALSE(results[i].failed);
        CHECK(results[i].id.find("k_alpha") != std::string::npos);
        CHECK(!results[i].param_value.empty());
    }
    for (size_t i = 0; i + 1 < results.size(); ++i)
        CHECK(results[i].s_final >= results[i + 1].s_final - 1e-9);
    // zero-rate run penetrates materially farther than base
    CHECK(results[0].s_final >= results[2].s_final + 0.1 * preset("base").L);
}

TEST_CASE("sweep rejects fewer than two points") {
    Scenario base = make_scenario("one", "base");
    CHECK_THROWS_AS(sweep(base, "k_alpha", {1.0}), InvalidParameterError);
}

TEST_CASE("run_all isolates per-scenario failures") {
    Scenario good = make_scenario("good", "no_reaction");
    Scenario bad = make_scenario("bad", "base");
    bad.overrides = {{"theta_min", "0.5"}};  // above theta_max: invalid
    auto results = run_all({good, bad});
    REQUIRE(results.size() == 2);
    CHECK_FALSE(results[0].failed);
    CHECK(results[1].failed);
    CHECK(results[1].error.find("bad") != std::string::npos);
}

TEST_CASE("run_all is order- and parallelism-independent") {
    std::vector<Scenario> scenarios = {make_scenario("a", "no_reaction"),
                                       make_scenario("b", "base"),
                                       make_scenario("c", "relaxed_cutoff")};
    auto serial = run_all(scenarios, 1);
    auto parallel = run_all(scenarios, 3);
    REQUIRE(serial.size() == parallel.size());
    for (size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].id == parallel[i].id);
        CHECK(serial[i].s_final == parallel[i].s_final);  // bitwise
        CHECK(serial[i].profiles.back().theta == parallel[i].profiles.back().theta);
    }
}

TEST_CASE("mixture study reproduces the tabulated ordering") {
    auto results = mixture_study(50);
    REQUIRE(results.size() == 4);
    std::vector<double> phi0s;
    for (const auto& r : results) {
        REQUIRE_FALSE(r.failed);
        phi0s.push_back(r.profiles.front().phi.back());  // undisturbed far end
    }
    // phi0 ordering 1 > 2 > 3 > 4
    CHECK(phi0s[0] > phi0s[1]);
    CHECK(phi0s[1] > phi0s[2]);
    CHECK(phi0s[2] > phi0s[3]);
    // mixture 1 shows no clogging: the front either keeps advancing through
    // 28 d or has already wetted the whole sample
    double L = preset("base").L;
    bool advancing =
        results[0].front_at(28.0) - results[0].front_at(26.0) > 0.01;
    bool fully_wetted = results[0].s_final >= L - 1e-9;
    CHECK((advancing || fully_wetted));
    // mixture 4 stalls closer to the inlet than mixture 3
    CHECK(results[3].s_final < results[2].s_final);
}

TEST_CASE("refinement study on a short grid ladder") {
    ConvergenceReport rep = refinement_study({25, 50, 100});
    REQUIRE(rep.grids == std::vector<int>{25, 50, 100});
    REQUIRE(rep.errors.size() == 2);
    REQUIRE(rep.ratios.size() == 1);
    REQUIRE(rep.orders.size() == 1);
    CHECK(rep.errors[0] > rep.errors[1]);
    CHECK(rep.ratios[0] == doctest::Approx(rep.errors[0] / rep.errors[1]));
    CHECK(rep.orders[0] == doctest::Approx(std::log2(rep.ratios[0])));
}

TEST_CASE("refinement study validates its grid list") {
    CHECK_THROWS_AS(refinement_study({25, 60}), InvalidGridError);   // not nested
    CHECK_THROWS_AS(refinement_study({100, 50}), InvalidGridError);  // decreasing
    CHECK_THROWS_AS(refinement_study({100}), InvalidParameterError); // single grid
}

TEST_CASE("campaign parsing") {
    TempFile f(
        "# k_alpha sensitivity\n"
        "[scenario ka_zero]\n"
        "preset=base\n"
        "k_alpha=0\n"
        "param_value=0\n"
        "grid=50\n"
        "\n"
        "[scenario base_ref]\n"
        "preset=base\n"
        "param_value=22.2\n"
        "t_end=14\n"
        "rtol=1e-7\n");
    auto scenarios = parse_campaign(f.path);
    REQUIRE(scenarios.size() == 2);
    CHECK(scenarios[0].id == "ka_zero");
    CHECK(scenarios[0].grid_n == 50);
    CHECK(scenarios[0].resolved_params().k_alpha == 0.0);
    CHECK(scenarios[0].param_value == "0");
    CHECK(scenarios[1].id == "base_ref");
    CHECK(scenarios[1].integrator.t_end == doctest::Approx(14.0));
    CHECK(scenarios[1].integrator.rtol == doctest::Approx(1e-7));
}

TEST_CASE("campaign parsing rejects malformed files") {
    SUBCASE("duplicate scenario id") {
        TempFile f("[scenario a]\npreset=base\n[scenario a]\npreset=base\n");
        CHECK_THROWS_AS(parse_campaign(f.path), InvalidParameterError);
    }
    SUBCASE("unknown parameter key") {
        TempFile f("[scenario a]\npreset=base\nnot_a_key=1\n");
        CHECK_THROWS_AS(parse_campaign(f.path), InvalidParameterError);
    }
    SUBCASE("preset after an override") {
        TempFile f("[scenario a]\nk_alpha=1\npreset=base\n");
        CHECK_THROWS_AS(parse_campaign(f.path), InvalidParameterError);
    }
    SUBCASE("keys before any section") {
        TempFile f("k_alpha=1\n[scenario a]\npreset=base\n");
        CHECK_THROWS_AS(parse_campaign(f.path), InvalidParameterError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(parse_campaign("/nonexistent/campaign.cfg"), IoError);
    }
}
