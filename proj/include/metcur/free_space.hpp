#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "metcur/lipmap.hpp"
#include "metcur/metric.hpp"

namespace metcur {

struct Atom {
    Point point;
    double weight = 0.0;
};

/// Finitely supported signed measure. Always canonical: atoms sorted by point,
/// duplicates merged, weights with |w| < zeroWeight dropped.
class SignedMeasure {
public:
    static constexpr double zeroWeight = 1e-15;

    SignedMeasure() = default;
    explicit SignedMeasure(std::vector<Atom> atoms);

    static SignedMeasure dirac(const Point& p, double weight = 1.0);

    const std::vector<Atom>& atoms() const { return atoms_; }
    bool empty() const { return atoms_.empty(); }
    std::size_t size() const { return atoms_.size(); }

    double totalMass() const;
    double totalVariation() const;

    /// Weight of the atom at p (0 if none).
    double weightAt(const Point& p) const;

    /// Atoms whose point satisfies the predicate.
    SignedMeasure restrictTo(const std::function<bool(const Point&)>& inside) const;

    SignedMeasure operator-() const;
    friend SignedMeasure operator+(const SignedMeasure& a, const SignedMeasure& b);
    friend SignedMeasure operator-(const SignedMeasure& a, const SignedMeasure& b);
    friend SignedMeasure operator*(double s, const SignedMeasure& m);
    friend bool operator==(const SignedMeasure& a, const SignedMeasure& b);

private:
    std::vector<Atom> atoms_;
};

/// An element sum a_i delta_{x_i} of the dual of Lip_{x0}(X). The base point
/// may be omitted for balanced elements (total mass zero), whose norm does not
/// depend on it.
struct FreeSpaceElement {
    SpacePtr space;
    SignedMeasure measure;
    std::optional<Point> base;

    bool balanced(double tolerance = 1e-12) const;
};

FreeSpaceElement diracDifference(SpacePtr space, const Point& x, const Point& y);

/// Norm of the element: sup { sum a_i f(x_i) : Lip(f) <= 1, f(x0) = 0 },
/// solved as the potential LP over f at the atoms (and the base point).
double aeNorm(const FreeSpaceElement& m);

/// Same LP with every point of `carrier` added as a free potential. By
/// McShane extension the value does not depend on the carrier.
double aeNormOnCarrier(const FreeSpaceElement& m, std::span<const Point> carrier);

/// The optimal potential found by the LP, one value per node in the order
/// base point, then atoms (then carrier points). Useful for certificates.
struct AeSolution {
    double norm = 0.0;
    std::vector<Point> nodes;
    std::vector<double> potential;
    std::size_t pivots = 0;
};
AeSolution aeNormDetailed(const FreeSpaceElement& m, std::span<const Point> carrier = {});

/// Min-cost transport of the positive part onto the negative part after
/// balancing through the base point (successive shortest paths). Independent
/// of the LP; used as a fast path and a cross-check.
double transportNorm(const FreeSpaceElement& m);

/// Norm of delta_{p1} - delta_{p2} - delta_{p3} + delta_{p4}: the cheaper of
/// the two matchings of {p1, p4} onto {p2, p3}.
double fourPointNorm(const MetricSpace& space, const Point& p1, const Point& p2, const Point& p3,
                     const Point& p4);

FreeSpaceElement pushforwardDual(const LipMap& phi, const FreeSpaceElement& m);

/// Phi(mu, nu) = sum a_i delta_{(x_i, y0)} + sum b_j delta_{(x0, y_j)} in the
/// sum-metric product; both elements need base points.
FreeSpaceElement productEmbed(const FreeSpaceElement& mu, const FreeSpaceElement& nu);

/// mu'(f) = mu(f - f(x1)) read at base point x0, where x1 is mu's base.
FreeSpaceElement rebase(const FreeSpaceElement& m, const Point& newBase);

/// Equality as functionals on Lip_{x0}(X): same base and the measures agree
/// away from the base atom.
bool sameFunctional(const FreeSpaceElement& a, const FreeSpaceElement& b, double tolerance = 0.0);

/// Writes the potential LP in plain text, one constraint per line.
void dumpLp(const FreeSpaceElement& m, std::ostream& out);

}  // namespace metcur
