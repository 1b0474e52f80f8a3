#include "pvvsg/curves.hpp"
#include "pvvsg/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <utility>

using namespace pvvsg;

namespace {

PiecewiseLinearCurve generator() {
    // Continuous through the origin: slopes 10, 40, 90, 200 with knees at 100, 150, 180 V.
    PiecewiseLinearCurve c;
    c.breakpoints = {100.0, 150.0, 180.0};
    c.slopes = {10.0, 40.0, 90.0, 200.0};
    c.intercepts[0] = 0.0;
    for (int i = 1; i < 4; ++i) {
        const double b = c.breakpoints[i - 1];
        c.intercepts[i] = c.slopes[i - 1] * b + c.intercepts[i - 1] - c.slopes[i] * b;
    }
    return c;
}

} // namespace

TEST_CASE("published coefficients are continuous") {
    CHECK_NOTHROW(validate(table_a3_deloaded()));
    CHECK_NOTHROW(validate(table_a3_max_power()));
    CHECK(table_a3_max_power().eval(273.3229) ==
          doctest::Approx(75417.5 * 273.3229 - 20523016.81));
}

TEST_CASE("segments and evaluation") {
    const PiecewiseLinearCurve c = generator();
    CHECK(c.segment(0.0) == 0);
    CHECK(c.segment(100.0) == 1);
    CHECK(c.segment(179.99) == 2);
    CHECK(c.segment(500.0) == 3);
    CHECK(c.eval(50.0) == doctest::Approx(500.0));
    CHECK(c.eval(120.0) == doctest::Approx(1000.0 + 40.0 * 20.0));
    CHECK(c.segment_begin(0) == 0.0);
    CHECK(std::isinf(c.segment_end(3)));
    CHECK_THROWS_AS(c.eval(-1.0), DomainError);
}

TEST_CASE("validate rejects jumps and unordered breakpoints") {
    PiecewiseLinearCurve c = generator();
    c.intercepts[2] += 500.0;
    CHECK(discontinuity(c, 1) > 0.02);
    CHECK_THROWS_AS(validate(c), DomainError);
    c = generator();
    c.breakpoints = {150.0, 100.0, 180.0};
    CHECK_THROWS_AS(validate(c), DomainError);
}

TEST_CASE("fit recovers a curve it can represent") {
    const PiecewiseLinearCurve g = generator();
    std::vector<LocusPoint> locus;
    for (double v = 60.0; v <= 200.0; v += 2.0) {
        locus.push_back({v, g.eval(v)});
    }
    const PiecewiseLinearCurve f = fit_locus(locus);
    for (int i = 0; i < 3; ++i) {
        CHECK(f.breakpoints[i] == doctest::Approx(g.breakpoints[i]));
    }
    for (int i = 0; i < 4; ++i) {
        CHECK(f.slopes[i] == doctest::Approx(g.slopes[i]).epsilon(1e-6));
    }
}

TEST_CASE("refit curves follow their loci") {
    const PvArrayParams a = preset_table_a2();
    const auto grid = default_irradiance_grid();
    CHECK(grid.size() == 91);
    for (bool pmax : {false, true}) {
        const auto locus = pmax ? max_power_locus(a, grid) : deloaded_locus(a, 0.2, grid);
        const auto curve = pmax ? fit_pmax_curve(a, grid) : fit_deloaded_curve(a, 0.2, grid);
        CHECK_NOTHROW(validate(curve));
        double worst = 0.0;
        for (const auto& pt : locus) {
            worst = std::max(worst, std::abs(curve.eval(pt.v) - pt.p) / pt.p);
        }
        CHECK(worst < 0.12);
    }
}

TEST_CASE("ray intersection matches the analytic root") {
    const PiecewiseLinearCurve g = generator();
    const std::pair<double, double> cases[] = {{20.0, 150.0}, {30.0, 175.0}, {35.0, 30300.0 / 165.0}};
    for (const auto& [k, expected] : cases) {
        const auto v = ray_intersection(g, k);
        REQUIRE(v.has_value());
        CHECK(*v == doctest::Approx(expected));
        CHECK(g.eval(*v) == doctest::Approx(k * *v));
    }
    CHECK_FALSE(ray_intersection(g, 5.0).has_value());
    CHECK_THROWS_AS(estimate_vmpp(50.0, 250.0, g), EstimationError);
    CHECK_THROWS_AS(estimate_vmpp(0.0, 250.0, g), DomainError);
}

TEST_CASE("scaling is linear") {
    const PiecewiseLinearCurve g = generator();
    const PiecewiseLinearCurve h = scale_power(g, 0.5);
    CHECK(h.breakpoints == g.breakpoints);
    CHECK(h.eval(170.0) == doctest::Approx(0.5 * g.eval(170.0)));
}

TEST_CASE("published curves evaluate as printed") {
    CHECK(table_a3_deloaded().eval(100.0) == doctest::Approx(3868.88));
    CHECK(table_a3_deloaded().eval(0.0) == 0.0);
    CHECK(table_a3_max_power().eval(260.0) == doctest::Approx(2391.15873 * 260.0 - 603717.4559));
}

TEST_CASE("zero reserve fit approaches the max-power fit") {
    const PvArrayParams a = preset_table_a2();
    const auto grid = default_irradiance_grid();
    const auto de0 = fit_deloaded_curve(a, 1e-8, grid);
    const auto pm = fit_pmax_curve(a, grid);
    for (const auto& pt : max_power_locus(a, grid)) {
        CHECK(std::abs(de0.eval(pt.v) - pm.eval(pt.v)) <= 0.01 * pm.eval(pt.v));
    }
}

TEST_CASE("refit is insensitive to grid density") {
    const PvArrayParams a = preset_table_a2();
    const auto dense = default_irradiance_grid();
    std::vector<double> sparse;
    for (std::size_t i = 0; i < dense.size(); i += 2) {
        sparse.push_back(dense[i]);
    }
    for (bool pmax : {false, true}) {
        const auto f1 = pmax ? fit_pmax_curve(a, dense) : fit_deloaded_curve(a, 0.2, dense);
        const auto f2 = pmax ? fit_pmax_curve(a, sparse) : fit_deloaded_curve(a, 0.2, sparse);
        double worst = 0.0;
        for (double v = 150.0; v <= 280.0; v += 0.5) {
            worst = std::max(worst, std::abs(f1.eval(v) - f2.eval(v)) / f1.eval(v));
        }
        CHECK(worst <= 0.005);
    }
}

TEST_CASE("max-power locus is monotone in irradiance") {
    const auto grid = default_irradiance_grid();
    const auto locus = max_power_locus(preset_table_a2(), grid);
    for (std::size_t i = 1; i < locus.size(); ++i) {
        CHECK(locus[i].v > locus[i - 1].v);
        CHECK(locus[i].p > locus[i - 1].p);
    }
}
