#include "metcur/lipmap.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "metcur/errors.hpp"

namespace metcur {

SamplePlan SamplePlan::allPairs(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> p;
    p.reserve(n * (n > 0 ? n - 1 : 0) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) p.emplace_back(i, j);
    return SamplePlan(std::move(p), "all-pairs");
}

SamplePlan SamplePlan::consecutive(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> p;
    for (std::size_t i = 0; i + 1 < n; ++i) p.emplace_back(i, i + 1);
    return SamplePlan(std::move(p), "consecutive");
}

SamplePlan SamplePlan::random(std::size_t n, std::size_t count, std::uint64_t seed) {
    std::vector<std::pair<std::size_t, std::size_t>> p;
    if (n < 2) return SamplePlan(std::move(p), "random");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    while (p.size() < count) {
        const auto a = pick(rng);
        const auto b = pick(rng);
        if (a != b) p.emplace_back(a, b);
    }
    return SamplePlan(std::move(p), "random(seed=" + std::to_string(seed) + ")");
}

SamplePlan SamplePlan::nearby(const MetricSpace& space, std::span<const Point> samples, double radius) {
    std::vector<std::pair<std::size_t, std::size_t>> p;
    for (std::size_t i = 0; i < samples.size(); ++i)
        for (std::size_t j = i + 1; j < samples.size(); ++j)
            if (space.distance(samples[i], samples[j]) <= radius) p.emplace_back(i, j);
    return SamplePlan(std::move(p), "nearby(r=" + std::to_string(radius) + ")");
}

LipEstimate lipEstimateDetailed(const LipMap& f, const SamplePlan& plan) {
    if (f.samples.size() < 2) throw Error(ErrorCode::EmptySample, "need at least two sample points");
    LipEstimate est;
    bool anyPair = false;
    for (std::size_t k = 0; k < plan.pairs().size(); ++k) {
        const auto [a, b] = plan.pairs()[k];
        const Point& x = f.samples.at(a);
        const Point& y = f.samples.at(b);
        const double dx = f.domain->distance(x, y);
        if (dx == 0.0) {
            ++est.skippedPairs;
            continue;
        }
        anyPair = true;
        const double q = f.target->distance(f.eval(x), f.eval(y)) / dx;
        if (q > est.value) {
            est.value = q;
            est.bestPair = k;
        }
    }
    if (!anyPair) throw Error(ErrorCode::EmptySample, "sample plan has no pair of distinct points");
    return est;
}

double lipEstimate(const LipMap& f, const SamplePlan& plan) { return lipEstimateDetailed(f, plan).value; }

double lipEstimate(const LipMap& f) { return lipEstimate(f, SamplePlan::allPairs(f.samples.size())); }

std::vector<Point> intervalGrid(double a, double b, std::size_t intervals) {
    if (intervals == 0) throw std::invalid_argument("interval grid needs at least one interval");
    std::vector<Point> pts;
    pts.reserve(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(intervals);
        pts.push_back({i == intervals ? b : a + (b - a) * s});
    }
    return pts;
}

LipMap compose(const LipMap& outer, const LipMap& inner) {
    LipMap m;
    m.domain = inner.domain;
    m.target = outer.target;
    m.eval = [o = outer.eval, i = inner.eval](const Point& x) { return o(i(x)); };
    m.samples = inner.samples;
    m.name = outer.name + " o " + inner.name;
    return m;
}

std::vector<SnowflakeRow> snowflakeCurveDiagnostic(const PointMap& curve, SpacePtr target,
                                                   std::span<const double> meshes) {
    std::vector<SnowflakeRow> rows;
    for (std::size_t i = 0; i < meshes.size(); ++i) {
        const double h = meshes[i];
        if (!(h > 0.0 && h <= 1.0)) throw std::invalid_argument("mesh must lie in (0, 1]");
        if (i > 0 && !(h < meshes[i - 1])) throw std::invalid_argument("meshes must be strictly decreasing");
        const auto intervals = static_cast<std::size_t>(std::llround(1.0 / h));
        LipMap f{euclidean(1), target, curve, intervalGrid(0.0, 1.0, intervals), "curve"};
        rows.push_back({h, lipEstimate(f, SamplePlan::consecutive(f.samples.size()))});
    }
    return rows;
}

}  // namespace metcur
