#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "bgw/fields.hpp"
#include "bgw/quadrature.hpp"
#include "bgw/serialize.hpp"

using namespace bgw;

TEST_CASE("grid spec validation") {
    const GridSpec fine{1, 1.0, 1.0 / 256};
    CHECK_NOTHROW(fine.validate());
    const GridSpec planar{2, 2.0, 1.0 / 8};
    CHECK_NOTHROW(planar.validate());
    const GridSpec bad_dim{3, 1.0, 0.5};
    CHECK_THROWS_AS(bad_dim.validate(), std::invalid_argument);
    const GridSpec bad_width{1, -1.0, 0.5};
    CHECK_THROWS_AS(bad_width.validate(), std::invalid_argument);
    const GridSpec off_origin{1, 1.0, 0.3};
    CHECK_THROWS_AS(off_origin.validate(), std::invalid_argument);
    const GridSpec spec{1, 1.0, 1.0 / 4};
    CHECK(spec.nodes_per_axis() == 9);
    CHECK(spec.coord(4) == 0.0);
}

TEST_CASE("cutoff profile") {
    CHECK(CutoffPsi::eval(0.0) == 1.0);
    CHECK(CutoffPsi::eval(0.25) == 1.0);
    CHECK(CutoffPsi::eval(0.5) == 0.0);
    CHECK(CutoffPsi::eval(1.0) == 0.0);
    for (double r = 0.0; r <= 0.6; r += 0.01) {
        CHECK(CutoffPsi::eval(r) >= 0.0);
        CHECK(CutoffPsi::eval(r) <= 1.0);
    }
    // Finite-difference derivative vanishes at both joins under refinement.
    for (double join : {0.25, 0.5}) {
        double prev = 1e9;
        for (double eps : {1e-2, 1e-3, 1e-4, 1e-5}) {
            const double fd = (CutoffPsi::eval(join + eps) - CutoffPsi::eval(join - eps)) / (2 * eps);
            CHECK(std::abs(fd) < prev + 1e-12);
            prev = std::abs(fd);
        }
        CHECK(prev < 1e-3);
    }
    CHECK(CutoffPsi::deriv(0.25) == 0.0);
    CHECK(CutoffPsi::deriv(0.5) == 0.0);
    CHECK(CutoffPsi::deriv(0.375) < 0.0);
}

TEST_CASE("analytic evaluation examples") {
    const AnalyticField constant{1, Polynomial1D{{1.0}}};
    CHECK(constant.eval({0.37, 0}) == 1.0);
    CHECK(constant.eval({-0.9, 0}) == 1.0);

    const AnalyticField bump{1, LogBump{1.0 / 16}};
    CHECK(bump.eval({0, 0}) == doctest::Approx(4 * std::log(2.0)).epsilon(1e-14));

    const AnalyticField cone{1, HolderCone{0.5, 1.0}};
    CHECK(cone.eval({0, 0}) == 0.0);
    CHECK(cone.eval({0.25, 0}) == doctest::Approx(0.5));
    CHECK(cone.eval({4.0, 0}) == 1.0);  // capped beyond the radius
}

TEST_CASE("analytic validation") {
    const AnalyticField wide_bump{1, LogBump{0.5}};
    CHECK_THROWS_AS(wide_bump.validate(), std::invalid_argument);
    const AnalyticField steep_cone{1, HolderCone{1.5, 1.0}};
    CHECK_THROWS_AS(steep_cone.validate(), std::invalid_argument);
    const AnalyticField planar_poly{2, Polynomial1D{{1.0}}};
    CHECK_THROWS_AS(planar_poly.validate(), std::invalid_argument);
    const AnalyticField inverted_box{1, IndicatorBox{{1, 0}, {0, 0}}};
    CHECK_THROWS_AS(inverted_box.validate(), std::invalid_argument);
}

TEST_CASE("sampling is exact at the nodes and preserves symmetry") {
    const GridSpec spec{1, 1.0, 1.0 / 256};
    const AnalyticField bump{1, LogBump{1.0 / 16}};
    const GridField g = sample(bump, spec);
    CHECK(g.values[spec.nearest_index(0.0)] == 4 * std::log(2.0));
    for (int i = 0; i < spec.nodes_per_axis(); ++i) {
        const Point x{spec.coord(i), 0};
        CHECK(g.values[i] == bump.eval(x));
        CHECK(g.values[i] == g.values[spec.nodes_per_axis() - 1 - i]);  // f(x) = f(-x)
    }

    const AnalyticField gauss{1, GaussianBump{1.0}};
    const GridField gg = sample(gauss, spec);
    for (int i = 0; i < spec.nodes_per_axis(); ++i)
        CHECK(gg.values[i] == gg.values[spec.nodes_per_axis() - 1 - i]);

    const AnalyticField c3{1, Polynomial1D{{3.0}}};
    for (double v : sample(c3, spec).values) CHECK(v == 3.0);
}

TEST_CASE("grid eval: nearest node and domain errors") {
    const GridSpec spec{1, 1.0, 0.25};
    AnalyticField line{1, Polynomial1D{{0.0, 1.0}}};
    const GridField g = sample(line, spec);
    CHECK(g.eval({0.6, 0}) == 0.5);  // nearest node
    CHECK(g.eval({0.65, 0}) == 0.75);
    CHECK_THROWS_AS(g.eval({1.5, 0}), std::out_of_range);
    CHECK(g.eval_extended({1.5, 0}) == 0.0);
}

TEST_CASE("quadrature: constants over boxes, balls, annuli") {
    const GridSpec spec{1, 2.0, 1.0 / 64};
    const GridField g = sample(AnalyticField{1, Polynomial1D{{2.5}}}, spec);
    const Region box = BoxRegion{{-1.0, 0}, {1.5, 0}};
    CHECK(box_integral(g, box) == doctest::Approx(2.5 * 2.5).epsilon(1e-12));
    const Region ball = BallRegion{{0, 0}, 0.75};
    CHECK(box_integral(g, ball) == doctest::Approx(2.5 * 1.5).epsilon(1e-12));
    const Region annulus = AnnulusRegion{{0, 0}, 0.5, 1.25};
    CHECK(box_integral(g, annulus) == doctest::Approx(2.5 * 1.5).epsilon(1e-12));
    CHECK(region_average(g, annulus) == doctest::Approx(2.5).epsilon(1e-14));

    // 2-d: subdivision fractions keep the average of a constant exact even
    // though the measure of a ball is approximate.
    const GridSpec spec2{2, 2.0, 1.0 / 16};
    const GridField g2 =
        sample(AnalyticField{2, CustomField{"c", [](const Point&, int) { return 1.5; }}}, spec2);
    const QuadratureResult q2 = region_quadrature(g2, BallRegion{{0, 0}, 1.0});
    CHECK(q2.measure == doctest::Approx(3.14159265358979).epsilon(0.02));
    CHECK(q2.integral / q2.measure == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("quadrature: x^2 over the unit dyadic annulus") {
    // Exact closed-form path for 1-d polynomials.
    const AnalyticField x2{1, Polynomial1D{{0.0, 0.0, 1.0}}};
    const Region omega0 = AnnulusRegion{{0, 0}, 1.0, 2.0};
    CHECK(box_integral(x2, omega0) == doctest::Approx(14.0 / 3).epsilon(1e-14));
    CHECK(region_average(x2, omega0, 1.0 / 256) == doctest::Approx(7.0 / 3).epsilon(1e-14));

    // Grid path converges to the same value.
    const GridSpec spec{1, 4.0, 1.0 / 512};
    const GridField g = sample(x2, spec);
    CHECK(box_integral(g, omega0) == doctest::Approx(14.0 / 3).epsilon(1e-4));
}

TEST_CASE("quadrature: odd monomial over a symmetric annulus") {
    const AnalyticField x3{1, Polynomial1D{{0.0, 0.0, 0.0, 1.0}}};
    CHECK(box_integral(x3, AnnulusRegion{{0, 0}, 0.5, 1.5}) == doctest::Approx(0.0).epsilon(1e-14));
    const GridSpec spec{1, 2.0, 1.0 / 128};
    const GridField g = sample(x3, spec);
    CHECK(std::abs(box_integral(g, AnnulusRegion{{0, 0}, 0.5, 1.5})) < 1e-12);
}

TEST_CASE("quadrature order on a smooth integrand is at least 1.9") {
    // Custom family so the closed-form polynomial path cannot kick in.
    const AnalyticField quad{
        1, CustomField{"quad", [](const Point& x, int) { return x[0] * x[0] + x[0] + 1.0; }}};
    const Region box = BoxRegion{{-0.4, 0}, {0.7, 0}};
    auto exact = [](double x) { return x * x * x / 3 + x * x / 2 + x; };
    const double truth = exact(0.7) - exact(-0.4);
    double err[3];
    double cell = 1.0 / 64;
    for (int level = 0; level < 3; ++level, cell /= 2)
        err[level] = std::abs(box_integral(quad, box, cell) - truth);
    const double order = std::log2(err[0] / err[2]) / 2.0;
    CHECK(order >= 1.9);
}

TEST_CASE("zero extension policy") {
    const GridSpec spec{1, 1.0, 1.0 / 32};
    const GridField g = sample(AnalyticField{1, GaussianBump{0.3}}, spec);
    const Region big = BallRegion{{0, 0}, 4.0};
    CHECK_THROWS_AS(region_quadrature(g, big), std::invalid_argument);
    const QuadratureResult q = region_quadrature(g, big, {}, true);
    CHECK(q.measure == doctest::Approx(8.0).epsilon(1e-12));  // exact measure
    // All the mass lives well inside the box.
    CHECK(q.integral == doctest::Approx(std::sqrt(2 * 3.14159265358979) * 0.3).epsilon(1e-3));

    const Region outside = AnnulusRegion{{0, 0}, 8.0, 16.0};
    CHECK_THROWS_AS(region_quadrature(g, outside), std::invalid_argument);
    CHECK(region_quadrature(g, outside, {}, true).integral == 0.0);
}

TEST_CASE("indicator boundary convention halves the edge samples") {
    const AnalyticField ind{1, IndicatorBox{{0, 0}, {1, 0}}};
    CHECK(ind.eval({0.5, 0}) == 1.0);
    CHECK(ind.eval({0.0, 0}) == 0.5);
    CHECK(ind.eval({1.0, 0}) == 0.5);
    CHECK(ind.eval({1.1, 0}) == 0.0);
    const GridSpec spec{1, 2.0, 1.0 / 256};
    const GridField g = sample(ind, spec);
    CHECK(box_integral(g, BoxRegion{{-2, 0}, {2, 0}}) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("grid field serialization round-trips") {
    const GridSpec spec{1, 1.0, 1.0 / 8};
    const GridField g = sample(AnalyticField{1, LogBump{1.0 / 8}}, spec);
    save_grid_field_json(g, "roundtrip.json");
    const GridField gj = load_grid_field("roundtrip.json");
    CHECK(gj.spec.dim == g.spec.dim);
    CHECK(gj.values == g.values);

    save_grid_field_csv(g, "roundtrip.csv");
    const GridField gc = load_grid_field("roundtrip.csv");
    REQUIRE(gc.values.size() == g.values.size());
    for (std::size_t i = 0; i < g.values.size(); ++i) CHECK(gc.values[i] == g.values[i]);

    const GridSpec spec2{2, 0.5, 1.0 / 8};
    const GridField g2 = sample(AnalyticField{2, GaussianBump{0.4}}, spec2);
    save_grid_field_csv(g2, "roundtrip2.csv");
    const GridField g2c = load_grid_field("roundtrip2.csv");
    CHECK(g2c.spec.dim == 2);
    for (std::size_t i = 0; i < g2.values.size(); ++i) CHECK(g2c.values[i] == g2.values[i]);

    std::remove("roundtrip.json");
    std::remove("roundtrip.csv");
    std::remove("roundtrip2.csv");
}
