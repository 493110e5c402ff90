#include "metcur/cosheaf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "metcur/errors.hpp"

namespace metcur {

OpenRegion::OpenRegion(std::string description, std::function<double(const Point&)> rho)
    : description_(std::move(description)), rho_(std::move(rho)) {}

OpenRegion OpenRegion::ball(SpacePtr space, Point center, double radius) {
    std::ostringstream d;
    d << "ball(r=" << radius << ")";
    return OpenRegion(d.str(), [space = std::move(space), c = std::move(center), radius](const Point& x) {
        return std::max(0.0, radius - space->distance(x, c));
    });
}

OpenRegion OpenRegion::halfPlane(Point normal, double offset) {
    const double len = std::sqrt(std::inner_product(normal.begin(), normal.end(), normal.begin(), 0.0));
    if (len == 0.0) throw Error(ErrorCode::DimensionMismatch, "half-plane normal is zero");
    std::ostringstream d;
    d << "half-plane(b=" << offset << ")";
    return OpenRegion(d.str(), [n = std::move(normal), offset, len](const Point& x) {
        if (x.size() != n.size()) throw Error(ErrorCode::DimensionMismatch, "half-plane point dimension");
        return std::max(0.0, (std::inner_product(n.begin(), n.end(), x.begin(), 0.0) - offset) / len);
    });
}

OpenRegion OpenRegion::above(double level) const {
    std::ostringstream d;
    d << "{" << description_ << " > " << level << "}";
    return OpenRegion(d.str(), [rho = rho_, level](const Point& x) { return std::max(0.0, rho(x) - level); });
}

ShrinkResult shrinkOpen(const std::vector<Point>& K, const OpenRegion& U) {
    if (K.empty()) throw Error(ErrorCode::EmptySample, "shrinkOpen needs a nonempty K");
    double eps = std::numeric_limits<double>::infinity();
    for (const auto& x : K) {
        const double r = U.rho(x);
        if (!(r > 0.0)) throw Error(ErrorCode::NotContained, "point of K outside U");
        eps = std::min(eps, r);
    }
    ShrinkResult out{U.above(eps / 2.0), eps};
    for (const auto& x : K)
        if (!out.region.contains(x)) throw std::logic_error("shrinkOpen postcondition failed");
    return out;
}

SeparateResult separateCover(const std::vector<Point>& K, const OpenRegion& U, const OpenRegion& V) {
    double top = 0.0;
    for (const auto& x : K) {
        if (!U.contains(x) && !V.contains(x)) throw Error(ErrorCode::CoverViolation, "point of K in neither U nor V");
        top = std::max(top, V.rho(x));
    }
    double eps = top > 0.0 ? top : 1.0;
    std::size_t halvings = 0;
    auto separated = [&](double e) {
        return std::all_of(K.begin(), K.end(), [&](const Point& x) { return V.rho(x) > e || U.contains(x); });
    };
    while (!separated(eps)) {
        eps /= 2.0;
        if (++halvings > 1100) throw Error(ErrorCode::CoverViolation, "halving search did not terminate");
    }
    return {V.above(eps), eps, halvings};
}

SignedMeasure phi0(const SignedMeasure& mu, const SignedMeasure& nu) { return mu + nu; }

std::pair<SignedMeasure, SignedMeasure> phi1(const SignedMeasure& xi) { return {xi, -xi}; }

namespace {

std::vector<Point> support(const SignedMeasure& m) {
    std::vector<Point> k;
    for (const auto& a : m.atoms()) k.push_back(a.point);
    return k;
}

}  // namespace

MvSplit mvDecompose(const SignedMeasure& xi, const OpenRegion& U, const OpenRegion& V) {
    const auto K = support(xi);
    for (const auto& x : K)
        if (!U.contains(x) && !V.contains(x)) throw Error(ErrorCode::CoverViolation, "atom in neither U nor V");
    if (K.empty()) return {};
    const SeparateResult w = separateCover(K, U, V);
    MvSplit out;
    out.epsilon = w.epsilon;
    out.mu = xi.restrictTo([&](const Point& x) { return !w.region.contains(x); });
    out.nu = xi.restrictTo([&](const Point& x) { return w.region.contains(x); });
    for (const auto& a : out.mu.atoms())
        if (!U.contains(a.point)) throw std::logic_error("mvDecompose: mu leaves U");
    for (const auto& a : out.nu.atoms())
        if (!V.contains(a.point)) throw std::logic_error("mvDecompose: nu leaves V");
    return out;
}

SignedMeasure mvKernelWitness(const SignedMeasure& mu, const SignedMeasure& nu, const OpenRegion& U,
                              const OpenRegion& V) {
    if (!phi0(mu, nu).empty()) throw Error(ErrorCode::NotInKernel, "mu + nu does not vanish");
    for (const auto& a : mu.atoms())
        if (!U.contains(a.point) || !V.contains(a.point))
            throw Error(ErrorCode::NotContained, "kernel pair not supported in U cap V");
    const SignedMeasure xi = mu;
    const auto [m, n] = phi1(xi);
    if (!(m == mu) || !(n == nu)) throw std::logic_error("mvKernelWitness: phi1 check failed");
    return xi;
}

}  // namespace metcur
