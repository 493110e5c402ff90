#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "metcur/errors.hpp"
#include "metcur/families.hpp"
#include "metcur/prism.hpp"

using namespace metcur;

namespace {

LipSimplex randomAffine(std::size_t k, std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<Point> v;
    for (std::size_t i = 0; i <= k; ++i) {
        Point p(dim);
        for (auto& x : p) x = u(rng);
        v.push_back(p);
    }
    return families::affineSimplex(v);
}

LipSimplex pointSimplex(const Point& p) {
    return LipSimplex(makeChart("point", 0, euclidean(p.size()), [p](const Point&) { return p; }));
}

}  // namespace

TEST_CASE("prism cells") {
    for (std::size_t k = 0; k <= 3; ++k) {
        const auto cells = prismCells(k);
        REQUIRE(cells.size() == k + 1);
        double fact = 1;
        for (std::size_t i = 2; i <= k + 1; ++i) fact *= static_cast<double>(i);
        double volume = 0.0;
        for (const auto& c : cells) {
            CHECK(c.param.inDim() == k + 1);
            CHECK(c.param.outDim() == k + 1);
            CHECK(c.orientation != 0.0);
            volume += std::abs(c.param.determinant()) / fact;
        }
        // the cells partition Delta^k x I, of volume 1/k!
        CHECK(volume == doctest::Approx(1.0 / (fact / static_cast<double>(k + 1))));
    }
}

TEST_CASE("prism cells cover Delta^k x I without overlap") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    for (std::size_t k = 1; k <= 3; ++k) {
        const auto cells = prismCells(k);
        // barycentric test: y in cell iff inverse(param)(y) lies in Delta^{k+1}
        std::vector<Eigen::MatrixXd> inv;
        std::vector<Eigen::VectorXd> off;
        for (const auto& c : cells) {
            const auto n = static_cast<Eigen::Index>(k + 1);
            Eigen::MatrixXd M(n, n);
            for (Eigen::Index r = 0; r < n; ++r)
                for (Eigen::Index col = 0; col < n; ++col)
                    M(r, col) = c.param.entry(static_cast<std::size_t>(r), static_cast<std::size_t>(col));
            inv.push_back(M.inverse());
            off.push_back(Eigen::Map<const Eigen::VectorXd>(c.param.offset().data(), n));
        }
        const SimplexDomain inner(k + 1);
        std::size_t samples = 0, covered = 0, overlaps = 0;
        while (samples < 20000) {
            Point y(k + 1);
            for (auto& x : y) x = u(rng);
            Point base(y.begin(), y.end() - 1);
            if (!SimplexDomain(k).contains(base, 0.0)) continue;
            ++samples;
            int hits = 0;
            for (std::size_t c = 0; c < cells.size(); ++c) {
                const Eigen::VectorXd s = inv[c] * (Eigen::Map<const Eigen::VectorXd>(y.data(), y.size()) - off[c]);
                if (inner.contains(Point(s.data(), s.data() + s.size()), 0.0)) ++hits;
            }
            covered += hits >= 1;
            overlaps += hits >= 2;
        }
        CHECK(static_cast<double>(covered) / samples >= 1.0 - 1e-3);
        CHECK(static_cast<double>(overlaps) / samples <= 1e-3);
    }
}

TEST_CASE("prism chains") {
    const LipSimplex p = pointSimplex({0.4, 0.7});
    const MeasureChain seg = prismChain(p);
    REQUIRE(seg.atoms().size() == 1);
    CHECK(seg.atoms()[0].weight == 1.0);
    CHECK(seg.degree() == 1);
    CHECK(seg.atoms()[0].simplex({0.0}) == Point{0.4, 0.7, 0.0});
    CHECK(seg.atoms()[0].simplex({1.0}) == Point{0.4, 0.7, 1.0});

    const MeasureChain two = prismChain(randomAffine(1, 2, 1));
    REQUIRE(two.atoms().size() == 2);
    double sum = 0.0;
    for (const auto& a : two.atoms()) sum += a.weight;
    CHECK(sum == 0.0);

    // unsigned volume of the prism over the identity simplex
    for (std::size_t k = 1; k <= 3; ++k) {
        const MeasureChain P = prismChain(families::identitySimplex(k));
        double total = 0.0;
        for (const auto& a : P.atoms())
            total += std::abs(evalSimplexCurrent(a.simplex, volumeForm(k + 1), Grid{2, false}).value);
        double fact = 1;
        for (std::size_t i = 2; i <= k; ++i) fact *= static_cast<double>(i);
        CHECK(total == doctest::Approx(1.0 / fact).epsilon(1e-12));
    }
}

TEST_CASE("calibrated convention") {
    const PrismConvention& c = calibratedConvention();
    CHECK(c.boundarySign == 1);
    CHECK(c.from == 1);
    CHECK(c.to == 0);
    CHECK(&c == &calibratedConvention());
    CHECK_FALSE(c.describe().empty());
    // same convention for every tested degree and simplex
    for (std::size_t k = 1; k <= 3; ++k) {
        const auto ok = satisfiedConventions(randomAffine(k, k + 1, 10 + k));
        REQUIRE(ok.size() == 1);
        CHECK(ok.front() == c);
        CHECK(homotopyDefect(families::uEps(0.1, std::max<std::size_t>(k, 2)), c).empty());
    }
    // for points the boundary term is absent, so the sign is not determined
    const auto ok0 = satisfiedConventions(pointSimplex({1.0}));
    CHECK(ok0.size() == 2);
    CHECK_FALSE(homotopyDefect(randomAffine(2, 2, 5), PrismConvention{-1, 0, 1}).empty());
}

TEST_CASE("homotopy identity numerically") {
    for (std::size_t k = 0; k <= 3; ++k) {
        const std::size_t dim = std::max<std::size_t>(k, 1);
        const auto sigma = randomAffine(k, dim, 20 + k);
        const auto g = homotopyIdentityCheck(sigma, randomForm(k, dim + 1, 5, true), Grid{8, true});
        CHECK(g.gap < 1e-9);
        const auto bad = homotopyIdentityCheck(sigma, randomForm(k, dim + 1, 5, true), Grid{8, true},
                                               PrismConvention{1, 0, 1});
        CHECK(bad.gap > 1e-6);
    }
    SUBCASE("u_eps") {
        const auto g = homotopyIdentityCheck(families::uEps(0.1, 2), randomForm(2, 3, 7, false), Grid{16, true});
        CHECK(g.gap <= 10.0 * (g.lhsError + g.rhsError) + 1e-12);
    }
    SUBCASE("constant simplex") {
        const LipSimplex c(makeChart("const", 2, euclidean(2), [](const Point&) { return Point{0.2, 0.3}; }));
        const auto g = homotopyIdentityCheck(c, randomForm(2, 3, 8, false), Grid{8, false});
        CHECK(std::abs(g.lhs) < 1e-12);
        CHECK(g.rhs == 0.0);
    }
    CHECK_THROWS_AS(homotopyIdentityCheck(families::identitySimplex(2), randomForm(1, 3, 1, false), Grid{4, false}),
                    Error);
}

TEST_CASE("Lipschitz contraction transport") {
    const auto R2 = euclidean(2);
    const PointMap cone = [](const Point& y) { return Point{(1 - y[2]) * y[0], (1 - y[2]) * y[1]}; };

    SUBCASE("triangle cycle") {
        const MeasureChain mu(1, {{families::affineSimplex({{0, 0}, {1, 0.2}}), 1.0},
                                  {families::affineSimplex({{1, 0.2}, {0.3, 1}}), 1.0},
                                  {families::affineSimplex({{0.3, 1}, {0, 0}}), 1.0}});
        const MeasureChain c = lipschitzContractionTransport(cone, R2, mu);
        CHECK(c.degree() == 2);
        const MeasureChain bd = boundaryChain(c);
        for (std::uint64_t s = 0; s < 5; ++s) {
            const TestForm f = randomForm(1, 2, 60 + s, false);
            const double lhs = evalChainCurrent(bd, f, Grid{32, false}).value;
            const double rhs = evalChainCurrent(mu, f, Grid{32, false}).value;
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
        }
    }
    SUBCASE("zero chain") { CHECK(lipschitzContractionTransport(cone, R2, MeasureChain(1)).empty()); }
    SUBCASE("balanced points") {
        const SignedMeasure m({{{0.5, 0.5}, 2.0}, {{-1, 0.25}, -2.0}});
        const MeasureChain mu = measureAsZeroChain(m, R2);
        const PointMap toOrigin = [](const Point& y) { return Point{(1 - y[2]) * y[0], (1 - y[2]) * y[1]}; };
        const MeasureChain c = lipschitzContractionTransport(toOrigin, R2, mu);
        CHECK(zeroChainMeasure(boundaryChain(c)) == m);
    }
    SUBCASE("not a cycle") {
        const MeasureChain path = MeasureChain::single(families::affineSimplex({{0, 0}, {1, 0}}));
        try {
            lipschitzContractionTransport(cone, R2, path);
            FAIL("expected NotACycle");
        } catch (const Error& e) {
            CHECK((e.code() == ErrorCode::NotACycle));
        }
        const MeasureChain pt = measureAsZeroChain(SignedMeasure::dirac({1, 1}), R2);
        CHECK_THROWS_AS(lipschitzContractionTransport(cone, R2, pt), Error);
    }
}
