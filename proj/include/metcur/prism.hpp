#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "metcur/currents.hpp"

namespace metcur {

/// Cell i of Delta^k x I: the (k+1)-simplex [w_0, ..., w_i, w'_i, ..., w'_k]
/// with w_j = (v_j, 0) and w'_j = (v_j, 1).
struct PrismCell {
    std::size_t index = 0;
    AffineMap param;  // Delta^{k+1} -> R^{k+1}, last coordinate is the interval
    double orientation = 0.0;  // sign of det(param)
};

std::vector<PrismCell> prismCells(std::size_t k);

/// Orientation convention for the homotopy identity
///   boundary(P sigma) + boundarySign * P(boundary sigma) = i_from sigma - i_to sigma.
struct PrismConvention {
    int boundarySign = 1;
    int from = 1;
    int to = 0;

    std::string describe() const;
    friend bool operator==(const PrismConvention&, const PrismConvention&) = default;
};

/// P sigma = sum_i (-1)^i (sigma x id) o cell_i, a (k+1)-chain in X x I.
MeasureChain prismChain(const LipSimplex& sigma);
MeasureChain prismChain(const MeasureChain& mu);

/// i_t o sigma : s -> (sigma(s), t), built on the same cylinder chart as the
/// prism so that the homotopy identity can be checked formally.
LipSimplex endSimplex(const LipSimplex& sigma, int t);
MeasureChain endChain(const MeasureChain& mu, int t);

/// Left minus right side of the identity as a formal k-chain; empty
/// exactly when the identity holds formally for sigma.
MeasureChain homotopyDefect(const LipSimplex& sigma, const PrismConvention& convention);

/// Tries the four sign/endpoint combinations on an affine 1-simplex and
/// returns the unique one under which the identity holds formally. Computed
/// once and then frozen.
const PrismConvention& calibratedConvention();

/// All combinations that satisfy the identity formally for sigma.
std::vector<PrismConvention> satisfiedConventions(const LipSimplex& sigma);

/// lhs = T(boundary P sigma + s P boundary sigma)(form),
/// rhs = T(i_from sigma - i_to sigma)(form); form lives on X x I.
IdentityGap homotopyIdentityCheck(const LipSimplex& sigma, const TestForm& form, const Grid& grid,
                                  const PrismConvention& convention = calibratedConvention());

/// Given a homotopy h : U x I -> V (as a chart on concatenated coordinates)
/// with h_0 the inclusion and h_1 constant, and a cycle mu in U, returns the
/// (k+1)-chain c = -(sign) h o P mu with boundary(c) = mu - h_1 mu. Throws
/// NotACycle when boundary(mu) does not vanish (k >= 1) or mu(U) != 0 (k = 0).
MeasureChain lipschitzContractionTransport(const PointMap& homotopy, SpacePtr target, const MeasureChain& mu,
                                           double tolerance = 1e-9);

}  // namespace metcur
