#include <doctest.h>

#include <cmath>
#include <random>

#include "metcur/errors.hpp"
#include "metcur/families.hpp"
#include "metcur/lipmap.hpp"
#include "metcur/metric.hpp"
#include "metcur/simplex.hpp"

using namespace metcur;

namespace {

std::vector<Point> cloud(std::size_t n, std::size_t dim, std::uint64_t seed, double scale = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<Point> pts(n, Point(dim));
    for (auto& p : pts)
        for (auto& x : p) x = u(rng);
    return pts;
}

}  // namespace

TEST_CASE("metric axioms hold for every space") {
    const auto pts2 = cloud(200, 2, 1);
    CHECK(checkMetricAxioms(*euclidean(2), pts2, 1000, 7).holds(0.0));
    CHECK(checkMetricAxioms(*snowflake(euclidean(2), 0.5), pts2, 1000, 8).holds(1e-15));
    CHECK(checkMetricAxioms(*snowflake(euclidean(2), 0.1), pts2, 1000, 9).holds(1e-15));
    CHECK(checkMetricAxioms(*product(euclidean(1), euclidean(1)), pts2, 1000, 10).holds(1e-15));
    const auto angles = cloud(200, 1, 2, 10.0);
    // coordinates up to 10 in magnitude: a few ulps of slack
    CHECK(checkMetricAxioms(*circle(2.0 * M_PI), angles, 1000, 11).holds(1e-14));
    const auto r = checkMetricAxioms(*euclidean(2), pts2, 1000, 7);
    CHECK(r.triples == 1000);
    CHECK(r.maxSelfDistance == 0.0);
    CHECK(r.minDistance >= 0.0);
}

TEST_CASE("derived distances") {
    const auto E = euclidean(2);
    CHECK(E->distance({0, 0}, {3, 4}) == doctest::Approx(5.0));

    const auto S = snowflake(euclidean(1), 0.5);
    CHECK(S->distance({0}, {4}) == doctest::Approx(2.0));
    CHECK(snowflake(euclidean(1), 1.0)->distance({1}, {3.5}) == 2.5);
    CHECK_THROWS_AS(snowflake(euclidean(1), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(snowflake(euclidean(1), 1.5), std::invalid_argument);

    const auto P = product(euclidean(2), euclidean(1));
    CHECK(P->dimension() == 3);
    CHECK(P->distance({0, 0, 0}, {3, 4, -2}) == doctest::Approx(7.0));

    const auto C = circle(2.0 * M_PI);
    CHECK(C->distance({0.1}, {2.0 * M_PI - 0.1}) == doctest::Approx(0.2));
    CHECK(C->distance({0.0}, {M_PI}) == doctest::Approx(M_PI));
    CHECK(C->distance({0.0}, {4.0 * M_PI + 0.5}) == doctest::Approx(0.5));
    CHECK_FALSE(C->normed());
    CHECK(E->normed());

    CHECK_THROWS_AS(E->distance({0, 0}, {1}), Error);
}

TEST_CASE("simplex domain") {
    for (std::size_t k = 0; k <= 4; ++k) {
        const SimplexDomain D(k);
        double fact = 1;
        for (std::size_t i = 2; i <= k; ++i) fact *= static_cast<double>(i);
        CHECK(D.volume() == doctest::Approx(1.0 / fact));
        for (std::size_t n : {1u, 3u, 4u}) {
            double vol = 0.0;
            std::size_t cells = 0;
            bool inside = true;
            D.forEachCell(n, [&](const SimplexCell& c) {
                vol += c.volume;
                ++cells;
                inside = inside && D.contains(c.centroid);
            });
            CHECK(cells == D.cellCount(n));
            CHECK(cells == static_cast<std::size_t>(std::pow(n, k)));
            CHECK(vol == doctest::Approx(D.volume()).epsilon(1e-12));
            CHECK(inside);
            for (const auto& p : D.grid(n)) CHECK(D.contains(p));
        }
    }
    SUBCASE("grid sizes and nesting") {
        const SimplexDomain D(2);
        CHECK(D.grid(4).size() == 15);
        const auto coarse = D.grid(2);
        const auto fine = D.grid(4);
        for (const auto& p : coarse) CHECK(std::find(fine.begin(), fine.end(), p) != fine.end());
        const auto edges = D.gridEdges(4);
        // 3 directions, each with n(n+1)/2 edges
        CHECK(edges.size() == 30);
        for (auto [a, b] : edges) {
            double d = 0;
            for (std::size_t i = 0; i < 2; ++i) d = std::max(d, std::abs(fine[a][i] - fine[b][i]));
            CHECK(d == doctest::Approx(0.25));
        }
    }
    SUBCASE("faces") {
        const SimplexDomain D(3);
        for (std::size_t i = 0; i <= 3; ++i) {
            const AffineMap f = D.faceInclusion(i);
            CHECK(f.inDim() == 2);
            CHECK(f.outDim() == 3);
            const SimplexDomain F(2);
            std::size_t image = 0;
            for (std::size_t j = 0; j <= 2; ++j) {
                if (image == i) ++image;
                CHECK(f(F.vertex(j)) == D.vertex(image));
                ++image;
            }
        }
    }
    SUBCASE("affine maps") {
        const AffineMap a = AffineMap::fromVertexImages({{1, 1}, {3, 1}, {1, 4}});
        CHECK(a({0, 0}) == Point{1, 1});
        CHECK(a({1, 0}) == Point{3, 1});
        CHECK(a.determinant() == doctest::Approx(6.0));
        const AffineMap id = AffineMap::identity(2);
        CHECK(a.after(id) == a);
        CHECK(id.after(a) == a);
        const AffineMap c = a.timesInterval();
        CHECK(c({1, 0, 0.5}) == Point{3, 1, 0.5});
    }
}

TEST_CASE("lipEstimate basics") {
    const auto pts = cloud(40, 3, 3);
    const auto E = euclidean(3);
    const LipMap id{E, E, [](const Point& x) { return x; }, pts, "id"};
    CHECK(lipEstimate(id) == doctest::Approx(1.0));
    const LipMap constant{E, E, [](const Point&) { return Point{1, 2, 3}; }, pts, "c"};
    CHECK(lipEstimate(constant) == 0.0);

    const LipMap single{E, E, [](const Point& x) { return x; }, {Point{0, 0, 0}}, "one"};
    CHECK_THROWS_AS(lipEstimate(single), Error);
    const LipMap repeated{E, E, [](const Point& x) { return x; }, {Point{1, 0, 0}, Point{1, 0, 0}}, "dup"};
    try {
        lipEstimate(repeated);
        FAIL("expected EmptySample");
    } catch (const Error& e) {
        CHECK((e.code() == ErrorCode::EmptySample));
    }

    SUBCASE("zero-distance pairs are skipped") {
        const LipMap m{E, E, [](const Point& x) { return x; }, {Point{0, 0, 0}, Point{0, 0, 0}, Point{1, 0, 0}}, "q"};
        const auto d = lipEstimateDetailed(m, SamplePlan::allPairs(3));
        CHECK(d.skippedPairs == 1);
        CHECK(d.value == doctest::Approx(1.0));
    }
}

TEST_CASE("lipEstimate of the ramp f_t") {
    const auto grid = intervalGrid(0.0, 1.0, 16);
    CHECK(grid.size() == 17);
    CHECK(grid.front()[0] == 0.0);
    CHECK(grid.back()[0] == 1.0);
    CHECK(lipEstimate(families::fTMap(0.25, grid)) == 2.0);
}

TEST_CASE("lipEstimate under refinement and composition") {
    const auto E = euclidean(1);
    const PointMap f = [](const Point& x) { return Point{std::sin(3.0 * x[0]) + 0.5 * x[0] * x[0]}; };
    double previous = 0.0;
    for (std::size_t n : {4u, 8u, 16u, 32u, 64u}) {
        const double est = lipEstimate(LipMap{E, E, f, intervalGrid(0.0, 2.0, n), "f"});
        CHECK(est >= previous);
        CHECK(est <= 3.0 + 2.0);  // |f'| <= 3 + x on [0, 2]
        previous = est;
    }
    const LipMap inner{E, E, [](const Point& x) { return Point{2.0 * std::sin(x[0])}; }, intervalGrid(-3, 3, 200), "g"};
    const LipMap outer{E, E, [](const Point& y) { return Point{std::atan(y[0])}; }, {}, "h"};
    CHECK(lipEstimate(compose(outer, inner)) <= 2.0 * 1.0 + 1e-12);
}

TEST_CASE("snowflake curve diagnostic") {
    const std::vector<double> meshes{1e-2, 1e-4};
    const auto rows = snowflakeCurveDiagnostic([](const Point& x) { return x; }, snowflake(euclidean(1), 0.5), meshes);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].estimate == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(rows[1].estimate == doctest::Approx(100.0).epsilon(1e-9));

    const auto flat =
        snowflakeCurveDiagnostic([](const Point&) { return Point{0.3}; }, snowflake(euclidean(1), 0.5), meshes);
    for (const auto& r : flat) CHECK(r.estimate == 0.0);

    const auto unit = snowflakeCurveDiagnostic([](const Point& x) { return x; }, snowflake(euclidean(1), 1.0), meshes);
    for (const auto& r : unit) CHECK(r.estimate == doctest::Approx(1.0));

    const std::vector<double> bad{1e-4, 1e-2};
    CHECK_THROWS(snowflakeCurveDiagnostic([](const Point& x) { return x; }, snowflake(euclidean(1), 0.5), bad));
}

TEST_CASE("sample plans") {
    CHECK(SamplePlan::allPairs(5).size() == 10);
    CHECK(SamplePlan::consecutive(5).size() == 4);
    const auto r1 = SamplePlan::random(20, 50, 3);
    const auto r2 = SamplePlan::random(20, 50, 3);
    CHECK(r1.pairs() == r2.pairs());
    for (auto [a, b] : r1.pairs()) CHECK(a != b);
    const auto pts = intervalGrid(0, 1, 10);
    const auto near = SamplePlan::nearby(*euclidean(1), pts, 0.15);
    CHECK(near.size() == 10);
}
