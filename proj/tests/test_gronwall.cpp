#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vsp/gronwall.hpp"

#include <cmath>
#include <functional>
#include <random>

using namespace vsp;

namespace {

// independent quadrature oracle: adaptive Simpson to 1e-10
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-10) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

ScalarFn constant(double c) {
    return [c](double) { return c; };
}

}  // namespace

TEST_CASE("variant I reproduces the classical constant-coefficient bound") {
    // rho0=1, K1=1: bound(t) = e^t
    const auto data = make_gronwall_I(0.0, 1.0, 1.0, nullptr, constant(1.0), nullptr, nullptr);
    const auto curve = gronwall_I(data, uniform_grid(0.0, 1.0, 10000));
    CHECK(curve.final_value() == doctest::Approx(2.718281828459045).epsilon(1e-6));
    CHECK(std::abs(curve.final_value() - 2.718281828459045) < 1e-6);
}

TEST_CASE("variant I memory case has the exp(t^2/2) closed form") {
    const auto data = make_gronwall_I(0.0, 1.0, 1.0, nullptr, nullptr, constant(1.0),
                                      [](double, double) { return 1.0; });
    const auto curve = gronwall_I(data, uniform_grid(0.0, 1.0, 10000));
    CHECK(std::abs(curve.final_value() - 1.6487212707001282) < 1e-6);
}

TEST_CASE("variant I pure integration is exact") {
    // rho0=0, eps=1, no coefficients: bound(t) = t
    const auto data = make_gronwall_I(0.0, 1.0, 0.0, constant(1.0), nullptr, nullptr, nullptr);
    const auto curve = gronwall_I(data, uniform_grid(0.0, 1.0, 100));
    for (std::size_t i = 0; i < curve.grid.size(); ++i)
        CHECK(curve.values[i] == doctest::Approx(curve.grid[i]).epsilon(1e-14));
}

TEST_CASE("variant I mixed case against the adaptive quadrature oracle") {
    // eps(t)=t, K1(t)=t, K2=1, K3(t,s)=s: gamma(t) = t + t^2/2
    const auto data = make_gronwall_I(0.0, 1.0, 1.0, [](double t) { return t; },
                                      [](double t) { return t; }, constant(1.0),
                                      [](double, double s) { return s; });
    const auto curve = gronwall_I(data, uniform_grid(0.0, 1.0, 4000));

    auto Gamma = [](double t) { return 0.5 * t * t + t * t * t / 6.0; };
    const double tail =
        integrate([&](double s) { return s * std::exp(Gamma(1.0) - Gamma(s)); }, 0.0, 1.0);
    const double oracle = std::exp(Gamma(1.0)) + tail;
    CHECK(oracle == doctest::Approx(2.6706044861025358).epsilon(1e-9));  // frozen
    CHECK(curve.final_value() == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("variant II reductions") {
    const Grid grid = uniform_grid(0.0, 1.0, 8000);

    SUBCASE("classical case K2=K") {
        const auto data =
            make_gronwall_II(0.0, 1.0, 1.0, nullptr, nullptr, constant(1.0), nullptr, nullptr);
        CHECK(std::abs(gronwall_II(data, grid).final_value() - 2.718281828459045) < 1e-6);
    }
    SUBCASE("sqrt drive alone: e^t - 1") {
        const auto data =
            make_gronwall_II(0.0, 1.0, 0.0, nullptr, constant(1.0), nullptr, nullptr, nullptr);
        CHECK(std::abs(gronwall_II(data, grid).final_value() - 1.718281828459045) < 1e-6);
    }
    SUBCASE("memory pair K3=K4=1: exp(t^2/2)") {
        const auto data = make_gronwall_II(0.0, 1.0, 1.0, nullptr, nullptr, nullptr, constant(1.0),
                                           constant(1.0));
        CHECK(std::abs(gronwall_II(data, grid).final_value() - 1.6487212707001282) < 1e-6);
    }
}

TEST_CASE("sqrt-form bound closed forms") {
    const Grid grid = uniform_grid(0.0, 1.0, 4000);

    SUBCASE("rho0=0, K1=1: (t - T0)/2") {
        const auto data = make_gronwall_II(0.0, 1.0, 0.0, nullptr, constant(1.0), nullptr, nullptr,
                                           nullptr, true);
        const auto curve = gronwall_II_sqrt(data, grid);
        for (std::size_t i = 0; i < grid.size(); i += 500)
            CHECK(curve.values[i] == doctest::Approx(0.5 * grid[i]).epsilon(1e-12));
    }
    SUBCASE("rho0=4, K2=2: 2 e^{t-T0}") {
        const auto data = make_gronwall_II(0.0, 1.0, 4.0, nullptr, nullptr, constant(2.0), nullptr,
                                           nullptr, true);
        CHECK(std::abs(gronwall_II_sqrt(data, grid).final_value() - 2.0 * 2.718281828459045) <
              1e-6);
    }
    SUBCASE("rho0=1, K1=1, K2=1 against the quadrature oracle") {
        const auto data = make_gronwall_II(0.0, 1.0, 1.0, nullptr, constant(1.0), constant(1.0),
                                           nullptr, nullptr, true);
        // gamma = 1: sqrt-bound(t) = e^{t/2} + 1/2 int_0^t e^{(t-s)/2} ds = 2 e^{t/2} - 1
        const double oracle =
            std::exp(0.5) + 0.5 * integrate([](double s) { return std::exp(0.5 * (1.0 - s)); },
                                            0.0, 1.0);
        CHECK(oracle == doctest::Approx(2.2974425414002563).epsilon(1e-9));  // frozen
        CHECK(gronwall_II_sqrt(data, grid).final_value() == doctest::Approx(oracle).epsilon(1e-6));
    }
}

TEST_CASE("hypothesis violations raise the named errors") {
    const Grid grid = uniform_grid(0.0, 1.0, 16);
    auto data = make_gronwall_I(0.0, 1.0, 1.0, nullptr, [](double t) { return t - 0.5; }, nullptr,
                                nullptr);
    CHECK_THROWS_AS(gronwall_I(data, grid), NegativeCoefficient);

    auto iib = make_gronwall_II(0.0, 1.0, 1.0, constant(0.5), constant(1.0), nullptr, nullptr,
                                nullptr, true);
    CHECK_THROWS_AS(gronwall_II_sqrt(iib, grid), EpsilonNotZero);

    auto ok = make_gronwall_I(0.0, 1.0, 1.0, nullptr, constant(1.0), nullptr, nullptr);
    CHECK_THROWS_AS(gronwall_I(ok, Grid{0.0, 0.5, 0.5, 1.0}), NonmonotoneGrid);
    CHECK_THROWS_AS(make_gronwall_I(0.0, 1.0, -1.0, nullptr, nullptr, nullptr, nullptr),
                    NegativeCoefficient);
}

TEST_CASE("dominance of the bounds over the equality dynamics") {
    const Grid grid = uniform_grid(0.0, 1.0, 400);

    SUBCASE("tight constant case: equality solution matches the bound") {
        const auto data = make_gronwall_I(0.0, 1.0, 1.0, nullptr, constant(1.0), nullptr, nullptr);
        const auto report = verify_dominance(gronwall_I(data, grid), data, grid);
        CHECK(report.margin >= -1e-9);
        CHECK(report.margin <= 1e-6);  // bound is attained, no slack
    }
    SUBCASE("memory case: solution cosh(t) strictly below exp(t^2/2)") {
        const auto data = make_gronwall_I(0.0, 1.0, 1.0, nullptr, nullptr, constant(1.0),
                                          [](double, double) { return 1.0; });
        const auto report = verify_dominance(gronwall_I(data, grid), data, grid);
        CHECK(report.margin >= -1e-9);
        CHECK(report.rho_numeric.back() == doctest::Approx(std::cosh(1.0)).epsilon(1e-6));
    }
    SUBCASE("variant II with sqrt drive: slack from sqrt(x) <= x + 1") {
        const auto data = make_gronwall_II(0.0, 1.0, 0.25, nullptr, constant(1.0), nullptr,
                                           nullptr, nullptr);
        const auto report = verify_dominance(gronwall_II(data, grid), data, grid);
        CHECK(report.margin >= -1e-9);
        // equality solution (1/2 + t/2)^2 reaches 1 at t=1, bound 0.25e + e - 1
        CHECK(report.rho_numeric.back() == doctest::Approx(1.0).epsilon(1e-8));
    }
    SUBCASE("sqrt form is tight for constant K1") {
        const auto data = make_gronwall_II(0.0, 1.0, 0.25, nullptr, constant(1.0), nullptr,
                                           nullptr, nullptr, true);
        const auto report = verify_dominance(gronwall_II_sqrt(data, grid), data, grid);
        CHECK(report.margin >= -1e-9);
        CHECK(report.margin <= 1e-6);
    }
}

TEST_CASE("all stock cases dominate within 1e-6") {
    for (const auto& gc : builtin_gronwall_cases()) {
        CAPTURE(gc.name);
        const Grid grid = uniform_grid(gc.data.T0, gc.data.T, 500);
        BoundCurve bound;
        switch (gc.data.variant) {
            case GronwallVariant::I: bound = gronwall_I(gc.data, grid); break;
            case GronwallVariant::IIa: bound = gronwall_II(gc.data, grid); break;
            case GronwallVariant::IIb: bound = gronwall_II_sqrt(gc.data, grid); break;
        }
        const auto report = verify_dominance(bound, gc.data, grid);
        CHECK(report.margin >= -1e-6);
    }
}

TEST_CASE("monotonicity in the data") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.5);
    const Grid grid = uniform_grid(0.0, 1.0, 200);
    for (int trial = 0; trial < 10; ++trial) {
        const double a0 = u(rng), a1 = u(rng), b0 = u(rng), b1 = u(rng);
        const double bump0 = u(rng), bump1 = u(rng);
        const auto lo = make_gronwall_I(0.0, 1.0, 0.7, [=](double t) { return a0 + a1 * t; },
                                        [=](double t) { return b0 + b1 * t * t; }, constant(0.5),
                                        [](double t, double s) { return t * s; });
        const auto hi = make_gronwall_I(0.0, 1.0, 0.7, [=](double t) { return a0 + a1 * t + bump0; },
                                        [=](double t) { return b0 + b1 * t * t + bump1; },
                                        constant(0.5), [](double t, double s) { return t * s; });
        const auto lo_curve = gronwall_I(lo, grid);
        const auto hi_curve = gronwall_I(hi, grid);
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(hi_curve.values[i] >= lo_curve.values[i] - 1e-12);
    }
}

TEST_CASE("grid refinement converges at trapezoid order") {
    // smooth non-polynomial data so the quadrature error is visible
    const auto data = make_gronwall_I(0.0, 1.0, 1.0, [](double t) { return std::cos(t) * std::cos(t); },
                                      [](double t) { return std::exp(-t); }, constant(1.0),
                                      [](double t, double s) { return std::exp(-(t - s)); });
    const double fine = gronwall_I(data, uniform_grid(0.0, 1.0, 3200)).final_value();
    const double e1 = std::abs(gronwall_I(data, uniform_grid(0.0, 1.0, 100)).final_value() - fine);
    const double e2 = std::abs(gronwall_I(data, uniform_grid(0.0, 1.0, 200)).final_value() - fine);
    CHECK(e1 / e2 >= 3.5);
    CHECK(e1 / e2 <= 4.5);
}

TEST_CASE("variant I and II agree on split kernels") {
    // K3(t,s) = K3(t) K4(s) and II's K1 moved into I's coefficients
    const Grid grid = uniform_grid(0.0, 1.0, 300);
    const ScalarFn k3 = [](double t) { return 1.0 + 0.5 * t; };
    const ScalarFn k4 = [](double s) { return 0.5 + s; };
    const ScalarFn k2 = [](double t) { return 0.25 + t; };
    const ScalarFn eps = [](double t) { return 0.1 * t; };

    const auto two = make_gronwall_II(0.0, 1.0, 0.9, eps, nullptr, k2, k3, k4);
    const auto one = make_gronwall_I(0.0, 1.0, 0.9, eps, k2, k3,
                                     [k4](double, double s) { return k4(s); });
    const auto curve2 = gronwall_II(two, grid);
    const auto curve1 = gronwall_I(one, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(curve1.values[i] == doctest::Approx(curve2.values[i]).epsilon(1e-12));
}

TEST_CASE("bound curves report a quadrature error estimate") {
    const auto data = make_gronwall_I(0.0, 1.0, 1.0, nullptr, [](double t) { return std::exp(t); },
                                      nullptr, nullptr);
    const auto curve = gronwall_I(data, uniform_grid(0.0, 1.0, 100));
    CHECK(curve.quadrature_error_estimate > 0.0);
    CHECK(curve.quadrature_error_estimate < 1e-3);
}
