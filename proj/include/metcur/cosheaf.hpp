#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "metcur/free_space.hpp"
#include "metcur/metric.hpp"

namespace metcur {

/// An open set U described by a margin function rho with U = {rho > 0}.
/// For balls and half-planes in Euclidean space rho is exactly the distance
/// to the complement; after shrinking it is a 1-Lipschitz lower bound.
class OpenRegion {
public:
    OpenRegion(std::string description, std::function<double(const Point&)> rho);

    static OpenRegion ball(SpacePtr space, Point center, double radius);
    /// {x : <normal, x> > offset} in Euclidean space.
    static OpenRegion halfPlane(Point normal, double offset);

    double rho(const Point& x) const { return rho_(x); }
    bool contains(const Point& x) const { return rho_(x) > 0.0; }
    const std::string& description() const { return description_; }

    /// {rho > level}, with margin rho - level.
    OpenRegion above(double level) const;

private:
    std::string description_;
    std::function<double(const Point&)> rho_;
};

struct ShrinkResult {
    OpenRegion region;  // {rho > eps/2}
    double epsilon = 0.0;
};

/// K inside U' with closure(U') inside U; eps = min_K rho.
ShrinkResult shrinkOpen(const std::vector<Point>& K, const OpenRegion& U);

struct SeparateResult {
    OpenRegion region;  // W = {rho_V > eps}
    double epsilon = 0.0;
    std::size_t halvings = 0;
};

/// closure(W) inside V and K - W inside U.
SeparateResult separateCover(const std::vector<Point>& K, const OpenRegion& U, const OpenRegion& V);

struct MvSplit {
    SignedMeasure mu;  // on U
    SignedMeasure nu;  // on V
    double epsilon = 0.0;
};

SignedMeasure phi0(const SignedMeasure& mu, const SignedMeasure& nu);
std::pair<SignedMeasure, SignedMeasure> phi1(const SignedMeasure& xi);

/// xi = mu + nu with mu = xi on K - W and nu = xi on K cap W.
MvSplit mvDecompose(const SignedMeasure& xi, const OpenRegion& U, const OpenRegion& V);

/// Returns xi on U cap V with phi1(xi) = (mu, nu).
SignedMeasure mvKernelWitness(const SignedMeasure& mu, const SignedMeasure& nu, const OpenRegion& U,
                              const OpenRegion& V);

}  // namespace metcur
