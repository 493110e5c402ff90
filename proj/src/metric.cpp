#include "metcur/metric.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "metcur/errors.hpp"

namespace metcur {

std::string_view toString(ErrorCode code) {
    switch (code) {
        case ErrorCode::EmptySample: return "EmptySample";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::LpNumerics: return "LpNumerics";
        case ErrorCode::TargetNotNormed: return "TargetNotNormed";
        case ErrorCode::DegenerateStep: return "DegenerateStep";
        case ErrorCode::DegreeZero: return "DegreeZero";
        case ErrorCode::DegreeNotZero: return "DegreeNotZero";
        case ErrorCode::NotACycle: return "NotACycle";
        case ErrorCode::NotContained: return "NotContained";
        case ErrorCode::CoverViolation: return "CoverViolation";
        case ErrorCode::NotInKernel: return "NotInKernel";
        case ErrorCode::NotAComplex: return "NotAComplex";
        case ErrorCode::UnknownSuite: return "UnknownSuite";
        case ErrorCode::SchemaViolation: return "SchemaViolation";
    }
    return "Unknown";
}

double EuclideanSpace::distance(const Point& x, const Point& y) const {
    if (x.size() != dim_ || y.size() != dim_)
        throw Error(ErrorCode::DimensionMismatch, "point dimension does not match " + name());
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return std::sqrt(s);
}

std::string EuclideanSpace::name() const { return "R^" + std::to_string(dim_); }

SnowflakeSpace::SnowflakeSpace(SpacePtr base, double alpha) : base_(std::move(base)), alpha_(alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("snowflake exponent must lie in (0, 1]");
}

double SnowflakeSpace::distance(const Point& x, const Point& y) const {
    const double d = base_->distance(x, y);
    if (alpha_ == 1.0) return d;
    return std::pow(d, alpha_);
}

std::string SnowflakeSpace::name() const {
    return "snowflake(" + base_->name() + ", " + std::to_string(alpha_) + ")";
}

ProductSpace::ProductSpace(SpacePtr left, SpacePtr right)
    : left_(std::move(left)), right_(std::move(right)) {}

double ProductSpace::distance(const Point& x, const Point& y) const {
    return left_->distance(leftPart(x), leftPart(y)) + right_->distance(rightPart(x), rightPart(y));
}

std::string ProductSpace::name() const { return left_->name() + " x " + right_->name(); }

Point ProductSpace::join(const Point& left, const Point& right) const {
    Point p;
    p.reserve(left.size() + right.size());
    p.insert(p.end(), left.begin(), left.end());
    p.insert(p.end(), right.begin(), right.end());
    return p;
}

Point ProductSpace::leftPart(const Point& p) const {
    const auto n = left_->dimension();
    if (p.size() != dimension())
        throw Error(ErrorCode::DimensionMismatch, "point dimension does not match " + name());
    return Point(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(n));
}

Point ProductSpace::rightPart(const Point& p) const {
    const auto n = left_->dimension();
    if (p.size() != dimension())
        throw Error(ErrorCode::DimensionMismatch, "point dimension does not match " + name());
    return Point(p.begin() + static_cast<std::ptrdiff_t>(n), p.end());
}

CircleSpace::CircleSpace(double circumference) : circumference_(circumference) {
    if (!(circumference > 0.0)) throw std::invalid_argument("circle circumference must be positive");
}

double CircleSpace::distance(const Point& x, const Point& y) const {
    if (x.size() != 1 || y.size() != 1)
        throw Error(ErrorCode::DimensionMismatch, "circle points carry one coordinate");
    double d = std::fmod(std::abs(x[0] - y[0]), circumference_);
    return std::min(d, circumference_ - d);
}

std::string CircleSpace::name() const { return "S^1(" + std::to_string(circumference_) + ")"; }

SpacePtr euclidean(std::size_t dim) { return std::make_shared<EuclideanSpace>(dim); }
SpacePtr snowflake(SpacePtr base, double alpha) {
    return std::make_shared<SnowflakeSpace>(std::move(base), alpha);
}
SpacePtr product(SpacePtr left, SpacePtr right) {
    return std::make_shared<ProductSpace>(std::move(left), std::move(right));
}
SpacePtr circle(double circumference) { return std::make_shared<CircleSpace>(circumference); }

bool MetricAxiomReport::holds(double tolerance) const {
    return maxSelfDistance <= tolerance && maxAsymmetry <= tolerance &&
           maxTriangleExcess <= tolerance && minDistance >= 0.0;
}

MetricAxiomReport checkMetricAxioms(const MetricSpace& space, std::span<const Point> points,
                                    std::size_t triples, std::uint64_t seed) {
    if (points.empty()) throw Error(ErrorCode::EmptySample, "no points to check");
    MetricAxiomReport r;
    r.triples = triples;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
    for (std::size_t t = 0; t < triples; ++t) {
        const Point& x = points[pick(rng)];
        const Point& y = points[pick(rng)];
        const Point& z = points[pick(rng)];
        const double dxy = space.distance(x, y);
        const double dyx = space.distance(y, x);
        const double dyz = space.distance(y, z);
        const double dxz = space.distance(x, z);
        r.maxSelfDistance = std::max(r.maxSelfDistance, space.distance(x, x));
        r.maxAsymmetry = std::max(r.maxAsymmetry, std::abs(dxy - dyx));
        r.maxTriangleExcess = std::max(r.maxTriangleExcess, dxz - dxy - dyz);
        r.minDistance = std::min({r.minDistance, dxy, dyz, dxz});
    }
    return r;
}

}  // namespace metcur
