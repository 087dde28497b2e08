#include <catch_amalgamated.hpp>

#include "neei/geometry.hpp"
#include "neei/oracle.hpp"
#include "neei/rng.hpp"

using namespace neei;

TEST_CASE("polygon validation") {
    CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {1, 0}}), ValidationError);
    CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {1, 0}, {1, 0 + 1e-12}}), ValidationError);
    // clockwise winding is rejected
    CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}}), ValidationError);
    // reflex vertex is rejected
    CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {2, 0}, {1, 0.1}, {2, 2}}), ValidationError);
    CHECK_NOTHROW(ConvexPolygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
}

TEST_CASE("min_distance facing unit squares") {
    const auto a = ConvexPolygon::axis_aligned_box({0, 0}, 0.5, 0.5);
    const auto b = ConvexPolygon::axis_aligned_box({3, 0}, 0.5, 0.5);
    CHECK(min_distance(a, b) == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("min_distance overlapping squares is zero") {
    const auto a = ConvexPolygon::axis_aligned_box({0, 0}, 0.5, 0.5);
    const auto b = ConvexPolygon::axis_aligned_box({0.4, 0.2}, 0.5, 0.5);
    CHECK(min_distance(a, b) == 0.0);
    // containment also counts as distance zero
    const auto inner = ConvexPolygon::axis_aligned_box({0, 0}, 0.1, 0.1);
    CHECK(min_distance(a, inner) == 0.0);
}

TEST_CASE("min_distance corner to corner") {
    const auto square = ConvexPolygon::axis_aligned_box({0, 0}, 0.5, 0.5);
    const ConvexPolygon tri({{2.0, 2.0}, {2.2, 2.0}, {2.1, 2.2}});
    // nearest features are the square corner (0.5, 0.5) and triangle corner (2, 2)
    CHECK(min_distance(square, tri) == Catch::Approx(1.5 * std::sqrt(2.0)).margin(1e-12));
}

TEST_CASE("min_distance symmetry and translation invariance") {
    Rng rng(20260809);
    for (int trial = 0; trial < 50; ++trial) {
        const ConvexPolygon a = random_convex_polygon(rng);
        const ConvexPolygon b = random_convex_polygon(rng);
        const double d_ab = min_distance(a, b);
        CHECK(d_ab == min_distance(b, a));
        const Vec2 shift{rng.uniform(-10, 10), rng.uniform(-10, 10)};
        CHECK(min_distance(a.translated(shift), b.translated(shift)) == Catch::Approx(d_ab).margin(1e-12));
    }
}

TEST_CASE("min_distance matches the boundary-sampling oracle") {
    Rng rng(42);
    double max_dev = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const ConvexPolygon a = random_convex_polygon(rng);
        const ConvexPolygon b = random_convex_polygon(rng);
        const double exact = min_distance(a, b);
        const double sampled = sampled_min_distance(a, b, 10000);
        max_dev = std::max(max_dev, std::fabs(exact - sampled));
    }
    INFO("max deviation " << max_dev);
    CHECK(max_dev < 1e-3);
}

TEST_CASE("wrap_angle maps into (-pi, pi]") {
    CHECK(wrap_angle(M_PI) == Catch::Approx(M_PI));
    CHECK(wrap_angle(-M_PI) == Catch::Approx(M_PI));
    CHECK(wrap_angle(3 * M_PI / 2) == Catch::Approx(-M_PI / 2));
    CHECK(wrap_angle(0.25) == Catch::Approx(0.25));
}
