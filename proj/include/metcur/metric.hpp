#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace metcur {

/// Points are coordinate vectors. Derived spaces (snowflakes, products) reuse
/// the coordinates of their factors and only change the distance.
using Point = std::vector<double>;

class MetricSpace {
public:
    virtual ~MetricSpace() = default;

    virtual double distance(const Point& x, const Point& y) const = 0;
    virtual std::string name() const = 0;

    /// Number of coordinates a point of this space carries.
    virtual std::size_t dimension() const = 0;

    /// True when points can be added and subtracted and the distance is a norm
    /// of the difference.
    virtual bool normed() const { return false; }
};

using SpacePtr = std::shared_ptr<const MetricSpace>;

class EuclideanSpace final : public MetricSpace {
public:
    explicit EuclideanSpace(std::size_t dim) : dim_(dim) {}

    double distance(const Point& x, const Point& y) const override;
    std::string name() const override;
    std::size_t dimension() const override { return dim_; }
    bool normed() const override { return true; }

private:
    std::size_t dim_;
};

/// (X, d^alpha) for 0 < alpha <= 1.
class SnowflakeSpace final : public MetricSpace {
public:
    SnowflakeSpace(SpacePtr base, double alpha);

    double distance(const Point& x, const Point& y) const override;
    std::string name() const override;
    std::size_t dimension() const override { return base_->dimension(); }

    const SpacePtr& base() const { return base_; }
    double alpha() const { return alpha_; }

private:
    SpacePtr base_;
    double alpha_;
};

/// X x W with the sum of the coordinate distances. A point is the
/// concatenation of a left point and a right point.
class ProductSpace final : public MetricSpace {
public:
    ProductSpace(SpacePtr left, SpacePtr right);

    double distance(const Point& x, const Point& y) const override;
    std::string name() const override;
    std::size_t dimension() const override { return left_->dimension() + right_->dimension(); }

    const SpacePtr& left() const { return left_; }
    const SpacePtr& right() const { return right_; }

    Point join(const Point& left, const Point& right) const;
    Point leftPart(const Point& p) const;
    Point rightPart(const Point& p) const;

private:
    SpacePtr left_;
    SpacePtr right_;
};

/// Circle of given circumference with the intrinsic (arc-length) metric; a
/// point is a single angle-like coordinate taken modulo the circumference.
class CircleSpace final : public MetricSpace {
public:
    explicit CircleSpace(double circumference);

    double distance(const Point& x, const Point& y) const override;
    std::string name() const override;
    std::size_t dimension() const override { return 1; }

    double circumference() const { return circumference_; }

private:
    double circumference_;
};

SpacePtr euclidean(std::size_t dim);
SpacePtr snowflake(SpacePtr base, double alpha);
SpacePtr product(SpacePtr left, SpacePtr right);
SpacePtr circle(double circumference);

struct MetricAxiomReport {
    std::size_t triples = 0;
    double maxSelfDistance = 0.0;     // max d(x,x)
    double maxAsymmetry = 0.0;        // max |d(x,y) - d(y,x)|
    double maxTriangleExcess = 0.0;   // max d(x,z) - d(x,y) - d(y,z)
    double minDistance = 0.0;         // should never be negative

    bool holds(double tolerance) const;
};

/// Draws `triples` random triples from `points` and records the worst
/// violation of each metric axiom.
MetricAxiomReport checkMetricAxioms(const MetricSpace& space, std::span<const Point> points,
                                    std::size_t triples, std::uint64_t seed);

}  // namespace metcur
