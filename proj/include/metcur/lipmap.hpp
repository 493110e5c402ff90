#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "metcur/metric.hpp"

namespace metcur {

using PointMap = std::function<Point(const Point&)>;

/// A Lipschitz map given as an evaluation oracle together with the finite
/// sample set on which all sup-type quantities are estimated.
struct LipMap {
    SpacePtr domain;
    SpacePtr target;
    PointMap eval;
    std::vector<Point> samples;
    std::string name;

    Point operator()(const Point& x) const { return eval(x); }
};

/// Which pairs of the sample set enter a sup over pairs. Indices refer to the
/// map's sample list.
class SamplePlan {
public:
    SamplePlan() = default;
    explicit SamplePlan(std::vector<std::pair<std::size_t, std::size_t>> pairs, std::string label = "explicit")
        : pairs_(std::move(pairs)), label_(std::move(label)) {}

    static SamplePlan allPairs(std::size_t n);
    /// (i, i+1) for consecutive samples.
    static SamplePlan consecutive(std::size_t n);
    static SamplePlan random(std::size_t n, std::size_t count, std::uint64_t seed);
    /// All pairs within `radius` in the given space; quadratic in the sample
    /// count, so meant for a few thousand points at most.
    static SamplePlan nearby(const MetricSpace& space, std::span<const Point> samples, double radius);

    const std::vector<std::pair<std::size_t, std::size_t>>& pairs() const { return pairs_; }
    const std::string& label() const { return label_; }
    std::size_t size() const { return pairs_.size(); }

private:
    std::vector<std::pair<std::size_t, std::size_t>> pairs_;
    std::string label_ = "empty";
};

struct LipEstimate {
    double value = 0.0;
    std::size_t bestPair = 0;     // index into the plan of the realizing pair
    std::size_t skippedPairs = 0; // pairs with zero domain distance
};

/// max over the plan of d(f(a), f(b)) / d(a, b). Throws EmptySample when the
/// sample set has fewer than two distinct points.
LipEstimate lipEstimateDetailed(const LipMap& f, const SamplePlan& plan);
double lipEstimate(const LipMap& f, const SamplePlan& plan);
/// Uses all pairs of the sample set.
double lipEstimate(const LipMap& f);

/// Uniform grid {0, h, 2h, ...} of [a, b] containing both endpoints.
std::vector<Point> intervalGrid(double a, double b, std::size_t intervals);

LipMap compose(const LipMap& outer, const LipMap& inner);

struct SnowflakeRow {
    double mesh = 0.0;
    double estimate = 0.0;
};

/// Lipschitz estimates of a curve [0,1] -> (X, d^alpha) on grids of the given
/// meshes using consecutive grid pairs. Meshes must be strictly decreasing.
std::vector<SnowflakeRow> snowflakeCurveDiagnostic(const PointMap& curve, SpacePtr target,
                                                   std::span<const double> meshes);

}  // namespace metcur
