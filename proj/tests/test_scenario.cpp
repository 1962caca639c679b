#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vsp/scenario.hpp"

#include <cstdio>
#include <fstream>

using namespace vsp;

namespace {

struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const std::string& contents) {
        path = std::filesystem::temp_directory_path() /
               ("vsp_scenario_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++) + ".json");
        std::ofstream out(path);
        out << contents;
    }
    ~TempFile() { std::filesystem::remove(path); }
    static int counter;
};
int TempFile::counter = 0;

}  // namespace

TEST_CASE("scenario round-trip") {
    const TempFile file(R"({
      "name": "roundtrip",
      "dimension": 2,
      "interval": [0.0, 2.0],
      "set": { "kind": "box", "lo": [0.0, 0.0], "hi": [1.0, 1.0] },
      "forcing": { "kind": "affine", "matrix": [[0.0, 0.0], [0.0, 0.0]],
                   "offset": { "kind": "constant", "value": [0.1, 0.0] } },
      "kernel": { "kind": "separable", "coefficient": { "kind": "exp-decay", "k0": 0.5, "lambda": 1.0 },
                  "offset": [0.0, 0.2] },
      "z": { "path": { "kind": "linear", "slope": [0.2, 0.0] } },
      "x0": [0.5, 0.5],
      "solver": { "scheme": "fixed-point", "n": 123, "tol_fp": 1e-7, "reparametrize": true },
      "verify": { "envelopes": true, "slow": false }
    })");
    const Scenario sc = load_scenario(file.path);
    CHECK(sc.name == "roundtrip");
    CHECK(sc.dimension == 2);
    CHECK(sc.spec.T == 2.0);
    CHECK(sc.config.scheme == Scheme::FixedPoint);
    CHECK(sc.config.n == 123);
    CHECK(sc.config.tol_fp == 1e-7);
    CHECK(sc.config.reparametrize);
    CHECK(sc.verify.envelopes);
    CHECK(sc.spec.set.convex());
    CHECK(sc.spec.z.value(1.0)(0) == doctest::Approx(0.2));
    CHECK(sc.spec.forcing.eval(0.0, Vec::Zero(2))(0) == doctest::Approx(0.1));
    CHECK(sc.spec.kernel.eval(1.0, 1.0, Vec::Zero(2))(1) == doctest::Approx(0.1));  // 0.5 * 0.2
}

TEST_CASE("parse errors carry a line anchor") {
    const TempFile file("{\n  \"dimension\": 1,\n  \"interval\": [0.0 1.0]\n}\n");
    try {
        load_scenario(file.path);
        FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("line 3") != std::string::npos);
    }
}

TEST_CASE("validation errors cite the field") {
    SUBCASE("missing x0") {
        const TempFile file(R"({"dimension": 1, "interval": [0.0, 1.0],
                                "set": {"kind": "whole-space"}})");
        try {
            load_scenario(file.path);
            FAIL("expected ScenarioError");
        } catch (const ScenarioError& e) {
            CHECK(std::string(e.what()).find("x0") != std::string::npos);
        }
    }
    SUBCASE("dimension mismatch") {
        const TempFile file(R"({"dimension": 2, "interval": [0.0, 1.0],
                               "set": {"kind": "whole-space"}, "x0": [0.0]})");
        CHECK_THROWS_AS(load_scenario(file.path), ScenarioError);
    }
    SUBCASE("infeasible x0") {
        const TempFile file(R"({"dimension": 1, "interval": [0.0, 1.0],
                               "set": {"kind": "box", "lo": [0.0], "hi": [1.0]}, "x0": [4.0]})");
        try {
            load_scenario(file.path);
            FAIL("expected ScenarioError");
        } catch (const ScenarioError& e) {
            CHECK(std::string(e.what()).find("C(T0)") != std::string::npos);
        }
    }
    SUBCASE("understated beta cites the sampled point") {
        const TempFile file(R"({"dimension": 1, "interval": [0.0, 1.0],
                               "set": {"kind": "whole-space"},
                               "forcing": {"kind": "affine", "matrix": [[1.0]], "beta_override": 0.1},
                               "x0": [1.0]})");
        try {
            load_scenario(file.path);
            FAIL("expected ScenarioError");
        } catch (const ScenarioError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("(H^f)") != std::string::npos);
            CHECK(msg.find("t = ") != std::string::npos);
        }
    }
}

TEST_CASE("stock scenarios all load-check cleanly") {
    const auto all = builtin_scenarios();
    CHECK(all.size() >= 8);
    int spheres = 0, moving = 0, with_memory = 0;
    for (const auto& sc : all) {
        CAPTURE(sc.name);
        CHECK(sc.spec.x0.size() == sc.dimension);
        CHECK_NOTHROW(validate_moduli(sc.spec));
        const Vec inner = sc.spec.x0 - sc.spec.z.value(sc.spec.T0);
        CHECK(distance(sc.spec.set, sc.spec.T0, inner) <= 1e-9);
        if (!sc.spec.set.convex()) ++spheres;
        if (!sc.spec.set.time_independent() || !sc.spec.z.constant()) ++moving;
        if (!is_zero_kernel(sc.spec.kernel)) ++with_memory;
    }
    CHECK(spheres >= 2);
    CHECK(moving >= 3);
    CHECK(with_memory >= 4);
    CHECK_THROWS_AS(builtin_scenario("no-such-scenario"), ScenarioError);
}
