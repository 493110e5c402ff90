#pragma once

#include <cstddef>
#include <vector>

#include "metcur/currents.hpp"
#include "metcur/lip_topology.hpp"

namespace metcur::families {

/// 0 on [0, t], (x - t)/sqrt(t) on [t, 2t], sqrt(t) on [2t, 1]; f_0 = 0.
double fT(double t, double x);
LipMap fTMap(double t, std::vector<Point> samples);

/// (sqrt(2 eps) sin(x1/eps), x2 sqrt(2 eps) cos(x1/eps), x3, ..., xk) on
/// R^k, k >= 2. eps = 0 gives the zero map.
ChartPtr uEpsChart(double eps, std::size_t k);
LipSimplex uEps(double eps, std::size_t k);

/// (sqrt(eps) sin(x1/eps^2), sqrt(eps) x2 cos(x1/eps^2)) on R^2.
ChartPtr vEpsChart(double eps);
LipSimplex vEps(double eps);

/// Closed-form [u_eps](1 d id) over the standard 2-simplex:
/// 1/2 + eps^2 (1 - cos(2/eps)) / 4.
double uEpsVolume2(double eps);

/// Closed-form [v_eps](1 d id) over the standard 2-simplex.
double vEpsVolume2(double eps);

/// The identity simplex Delta^k -> R^k.
LipSimplex identitySimplex(std::size_t k);

/// Affine simplex with the given vertex images.
LipSimplex affineSimplex(const std::vector<Point>& vertices);

/// Points of the circle of circumference 2 pi, equally spaced.
std::vector<Point> circleSamples(std::size_t n);

/// x -> t sin(x) and x -> t sin(x / t) on the circle of circumference 2 pi
/// into R (1/t should be an integer for the second to be continuous there).
C1Map tSin(double t, std::vector<Point> samples);
C1Map tSinOverT(double t, std::vector<Point> samples);
C1Map zeroC1(std::vector<Point> samples);

}  // namespace metcur::families
