#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "iterplan/geom/geometry.hpp"

using namespace iterplan::geom;

TEST_CASE("polyline arc length and interpolation") {
    Polyline line({{0, 0}, {3, 0}, {3, 4}});
    CHECK(line.length() == doctest::Approx(7.0));
    auto p = line.point_at_arc(3.0);
    CHECK(p.x == doctest::Approx(3.0));
    CHECK(p.y == doctest::Approx(0.0));
    p = line.point_at_arc(5.0);
    CHECK(p.x == doctest::Approx(3.0));
    CHECK(p.y == doctest::Approx(2.0));
    CHECK_THROWS_AS(Polyline({{1, 1}}), std::invalid_argument);
}

TEST_CASE("projection picks the closest segment") {
    Polyline line({{0, 0}, {10, 0}});
    auto [arc, d] = line.project({4.0, 3.0});
    CHECK(arc == doctest::Approx(4.0));
    CHECK(d == doctest::Approx(3.0));
}

TEST_CASE("convex hull of a square keeps corners only") {
    auto hull = convex_hull({{0, 0}, {2, 0}, {2, 2}, {0, 2}, {1, 1}});
    CHECK(hull.size() == 4);
    CHECK(distance_to_hull(hull, {1, 1}) == doctest::Approx(0.0));
    CHECK(distance_to_hull(hull, {3, 1}) == doctest::Approx(1.0));
}

TEST_CASE("along-road distance routes through the junction") {
    // Y-road: three branches meeting at (0,0).
    RoadGeometry road({Polyline({{0, 0}, {4, 0}}), Polyline({{0, 0}, {0, 3}}),
                       Polyline({{0, 0}, {-2, 0}})});
    CHECK(road.along_road_distance({4, 0}, {0, 3}) == doctest::Approx(7.0));
    CHECK(road.along_road_distance({2, 0}, {3, 0}) == doctest::Approx(1.0));
    CHECK(road.along_road_distance({-2, 0}, {4, 0}) == doctest::Approx(6.0));
    CHECK(road.distance_to_road({1, 1}) == doctest::Approx(1.0));
    // Projected points off the road still measure along the road.
    CHECK(road.along_road_distance({2, 0.0005}, {0, 1}) == doctest::Approx(3.0).epsilon(0.01));
}
