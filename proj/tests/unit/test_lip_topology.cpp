#include <doctest.h>

#include <cmath>
#include <random>

#include "metcur/errors.hpp"
#include "metcur/families.hpp"
#include "metcur/lip_topology.hpp"

using namespace metcur;

namespace {

LipMap onLine(PointMap f, std::vector<Point> samples, std::string name = "f") {
    return {euclidean(1), euclidean(1), std::move(f), std::move(samples), std::move(name)};
}

LipMap randomWave(std::mt19937_64& rng, const std::vector<Point>& samples) {
    std::uniform_real_distribution<double> u(-1, 1);
    const double a = u(rng), w = 2 + 2 * u(rng), c = 3 * u(rng), d = u(rng);
    return onLine([=](const Point& x) { return Point{a * std::sin(w * x[0] + c) + d * x[0]}; }, samples);
}

}  // namespace

TEST_CASE("bt distance") {
    const auto grid = intervalGrid(0, 1, 20);
    const auto plan = SamplePlan::allPairs(grid.size());
    const auto f = onLine([](const Point& x) { return x; }, grid);
    const auto zero = btDistance(f, f, plan);
    CHECK(zero.total == 0.0);
    const auto shifted = btDistance(f, onLine([](const Point& x) { return Point{x[0] - 0.75}; }, grid), plan);
    CHECK(shifted.supPart == doctest::Approx(0.75));
    CHECK(shifted.lipPart == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(shifted.total == shifted.supPart + shifted.lipPart);

    const auto g16 = intervalGrid(0, 1, 16);
    const auto ft = btDistance(families::fTMap(0.25, g16), families::fTMap(0.0, g16), SamplePlan::allPairs(17));
    CHECK(ft.supPart == 0.5);
    CHECK(ft.lipPart == 2.0);
    CHECK(ft.total == 2.5);

    const LipMap onCircle{circle(1.0), circle(1.0), [](const Point& x) { return x; }, grid, "c"};
    CHECK_THROWS_AS(btDistance(onCircle, onCircle, plan), Error);
}

TEST_CASE("mt distance examples") {
    const auto grid = intervalGrid(0, 1, 10);
    const auto plan = SamplePlan::allPairs(grid.size());
    const auto X = euclidean(2);
    const LipMap cx{euclidean(1), X, [](const Point&) { return Point{0, 0}; }, grid, "x"};
    const LipMap cy{euclidean(1), X, [](const Point&) { return Point{3, 4}; }, grid, "y"};
    const auto d = mtDistance(cx, cy, plan);
    CHECK(d.supPart == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(d.lipPart == 0.0);
    CHECK(mtDistance(cx, cx, plan).total == 0.0);

    const auto g16 = intervalGrid(0, 1, 16);
    const auto ft = mtDistance(families::fTMap(0.25, g16), families::fTMap(0.0, g16), SamplePlan::allPairs(17));
    CHECK(ft.supPart == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ft.lipPart == 2.0);
}

TEST_CASE("mt distance properties on random maps") {
    std::mt19937_64 rng(21);
    const auto grid = intervalGrid(0, 1, 11);
    const auto plan = SamplePlan::allPairs(grid.size());
    std::vector<LipMap> maps;
    for (int i = 0; i < 6; ++i) maps.push_back(randomWave(rng, grid));
    for (const auto& f : maps)
        for (const auto& g : maps) {
            const auto fg = mtDistance(f, g, plan), gf = mtDistance(g, f, plan);
            CHECK(fg.total == gf.total);
            CHECK(fg.supPart == doctest::Approx(uniformDistance(f, g)).epsilon(1e-12));
            CHECK(fg.total >= uniformDistance(f, g) - 1e-12);
            CHECK(fg.lipPart >= std::abs(lipEstimate(f, plan) - lipEstimate(g, plan)) - 1e-12);
            const auto bt = btDistance(f, g, plan);
            CHECK(fg.supPart == doctest::Approx(bt.supPart).epsilon(1e-12));
            CHECK(bt.lipPart <= fg.lipPart + 1e-12);
            for (const auto& h : maps) CHECK(fg.total <= mtDistance(f, h, plan).total + mtDistance(h, g, plan).total + 2e-9);
        }
}

TEST_CASE("mt is not within a factor two of bt") {
    // f = (0, 10), g = (1, 11) at two points: bt Lip part 0, mt Lip part 2/1.
    const std::vector<Point> two{{0.0}, {1.0}};
    const auto f = onLine([](const Point& x) { return Point{10 * x[0]}; }, two);
    const auto g = onLine([](const Point& x) { return Point{10 * x[0] + 1}; }, two);
    const auto plan = SamplePlan::allPairs(2);
    CHECK(btDistance(f, g, plan).lipPart == 0.0);
    CHECK(mtDistance(f, g, plan).lipPart == doctest::Approx(2.0));
}

TEST_CASE("composition, product and singleton domains") {
    std::mt19937_64 rng(22);
    const auto grid = intervalGrid(0, 1, 9);
    const auto plan = SamplePlan::allPairs(grid.size());
    const auto f = randomWave(rng, grid), g = randomWave(rng, grid);
    const double base = mtDistance(f, g, plan).total;

    SUBCASE("post-composition") {
        for (double L : {0.5, 1.0, 3.0}) {
            const LipMap phi{euclidean(1), euclidean(1), [L](const Point& y) { return Point{L * std::tanh(y[0])}; },
                             {}, "phi"};
            CHECK(mtDistance(compose(phi, f), compose(phi, g), plan).total <= L * base + 1e-8);
        }
    }
    SUBCASE("pre-composition") {
        // psi(w) = L w maps the grid j/(9L) onto the grid j/9
        for (double L : {0.5, 2.0}) {
            const std::size_t n = 9;
            const auto wgrid = intervalGrid(0, 1.0 / L, n);
            const LipMap psi{euclidean(1), euclidean(1), [L](const Point& w) { return Point{L * w[0]}; }, wgrid, "psi"};
            const auto fp = compose(f, psi), gp = compose(g, psi);
            CHECK(mtDistance(fp, gp, plan).total <= std::max(1.0, L) * base + 1e-9);
            CHECK(mtDistance(fp, gp, plan).supPart == doctest::Approx(mtDistance(f, g, plan).supPart).epsilon(1e-12));
        }
    }
    SUBCASE("product with a fixed map") {
        const auto P = product(euclidean(1), euclidean(1));
        auto pairWith = [&](const LipMap& m, PointMap h) {
            return LipMap{euclidean(1), P, [m, h](const Point& x) {
                              Point y = m(x);
                              const Point z = h(x);
                              y.insert(y.end(), z.begin(), z.end());
                              return y;
                          },
                          grid, "pair"};
        };
        const PointMap constant = [](const Point&) { return Point{0.4}; };
        CHECK(mtDistance(pairWith(f, constant), pairWith(g, constant), plan).total ==
              doctest::Approx(base).epsilon(1e-9));
        const PointMap moving = [](const Point& x) { return Point{std::cos(3 * x[0])}; };
        CHECK(mtDistance(pairWith(f, moving), pairWith(g, moving), plan).total >= base - 1e-9);
    }
    SUBCASE("singleton domain") {
        const std::vector<Point> star{{0.3}};
        const auto fs = onLine(f.eval, star), gs = onLine(g.eval, star);
        CHECK(mtDistance(fs, gs, SamplePlan()).total == doctest::Approx(std::abs(f({0.3})[0] - g({0.3})[0])));
    }
}

TEST_CASE("trend classification") {
    const std::vector<double> geometric{1.0, 0.5, 0.25, 0.125};
    CHECK((classifyTrend(geometric) == Trend::Converging));
    const std::vector<double> growing{1.0, 1.4, 2.0, 2.8};
    CHECK((classifyTrend(growing) == Trend::Diverging));
    const std::vector<double> flat{1.0, 1.0, 1.0, 1.0};
    CHECK((classifyTrend(flat) == Trend::Stalled));
    const std::vector<double> zeros{0.0, 0.0, 0.0};
    CHECK((classifyTrend(zeros) == Trend::Converging));
    CHECK(toString(Trend::Diverging) == "diverging");
}

TEST_CASE("convergence diagnostic") {
    const auto grid = intervalGrid(0, 1, 64);
    const auto plan = SamplePlan::allPairs(grid.size());
    const std::vector<double> ts{0.5, 0.25, 0.125, 0.0625};
    const auto ramp = convergenceDiagnostic([&](double t) { return families::fTMap(t, grid); },
                                            families::fTMap(0, grid), ts, plan);
    for (const auto& r : ramp.rows) {
        CHECK(r.uniformDist == doctest::Approx(std::sqrt(r.t)).epsilon(1e-12));
        CHECK(r.mt.lipPart >= 1.0 / std::sqrt(r.t) - 1e-12);
    }
    CHECK(ramp.coConvergent);
    CHECK_FALSE(ramp.mtConvergent);

    const auto still = convergenceDiagnostic([&](double) { return families::fTMap(0.3, grid); },
                                             families::fTMap(0.3, grid), ts, plan);
    for (const auto& r : still.rows) CHECK(r.mt.total == 0.0);

    const auto smooth = convergenceDiagnostic(
        [&](double t) { return onLine([t](const Point& x) { return Point{t * std::sin(x[0])}; }, grid); },
        onLine([](const Point&) { return Point{0.0}; }, grid), ts, plan);
    CHECK(smooth.coConvergent);
    CHECK(smooth.mtConvergent);
    for (const auto& r : smooth.rows) {
        CHECK(r.uniformDist <= r.t + 1e-12);
        CHECK(r.lipEstimate <= r.t + 1e-12);
    }
}

TEST_CASE("c1 comparison on the circle") {
    const auto s = families::circleSamples(200);
    const auto plan = SamplePlan::allPairs(s.size());
    const std::vector<double> ts{0.5, 0.25, 0.125};
    const auto slow = c1Comparison([&](double t) { return families::tSin(t, s); }, families::zeroC1(s), ts, plan);
    for (const auto& r : slow.rows) {
        CHECK(r.c1Dist == doctest::Approx(2 * r.t).epsilon(1e-12));
        CHECK(r.mt.supPart == doctest::Approx(r.t).epsilon(1e-9));
        CHECK(r.mt.total <= 2 * r.t + 1e-9);
    }
    CHECK((slow.c1Trend == Trend::Converging));
    CHECK((slow.mtTrend == Trend::Converging));

    const auto same = c1Comparison([&](double) { return families::zeroC1(s); }, families::zeroC1(s), ts, plan);
    for (const auto& r : same.rows) {
        CHECK(r.c1Dist == 0.0);
        CHECK(r.mt.total == 0.0);
    }

    const auto fast =
        c1Comparison([&](double t) { return families::tSinOverT(t, s); }, families::zeroC1(s), ts, plan);
    for (const auto& r : fast.rows) {
        CHECK(r.c1Dist >= 1.0);
        CHECK(r.mt.lipPart >= 0.9);
    }
    CHECK((fast.c1Trend != Trend::Converging));
    CHECK((fast.mtTrend != Trend::Converging));
}
