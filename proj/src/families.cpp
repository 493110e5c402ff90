#include "metcur/families.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace metcur::families {

double fT(double t, double x) {
    if (t <= 0.0) return 0.0;
    const double r = std::sqrt(t);
    if (x <= t) return 0.0;
    if (x <= 2.0 * t) return (x - t) / r;
    return r;
}

LipMap fTMap(double t, std::vector<Point> samples) {
    std::ostringstream name;
    name << "f_t(t=" << t << ")";
    return {euclidean(1), euclidean(1), [t](const Point& x) { return Point{fT(t, x.at(0))}; }, std::move(samples),
            name.str()};
}

ChartPtr uEpsChart(double eps, std::size_t k) {
    if (k < 2) throw std::invalid_argument("u_eps needs k >= 2");
    std::ostringstream name;
    name << "u_eps(eps=" << eps << ",k=" << k << ")";
    PointMap eval;
    if (eps == 0.0) {
        eval = [k](const Point&) { return Point(k, 0.0); };
    } else {
        const double amp = std::sqrt(2.0 * eps);
        eval = [amp, eps](const Point& x) {
            Point y(x);
            y[0] = amp * std::sin(x[0] / eps);
            y[1] = x[1] * amp * std::cos(x[0] / eps);
            return y;
        };
    }
    return makeChart(name.str(), k, euclidean(k), std::move(eval));
}

LipSimplex uEps(double eps, std::size_t k) { return LipSimplex(uEpsChart(eps, k)); }

ChartPtr vEpsChart(double eps) {
    std::ostringstream name;
    name << "v_eps(eps=" << eps << ")";
    PointMap eval;
    if (eps == 0.0) {
        eval = [](const Point&) { return Point{0.0, 0.0}; };
    } else {
        const double amp = std::sqrt(eps);
        const double freq = 1.0 / (eps * eps);
        eval = [amp, freq](const Point& x) {
            return Point{amp * std::sin(x[0] * freq), amp * x[1] * std::cos(x[0] * freq)};
        };
    }
    return makeChart(name.str(), 2, euclidean(2), std::move(eval));
}

LipSimplex vEps(double eps) { return LipSimplex(vEpsChart(eps)); }

// The Jacobian determinant of u_eps is 2 cos^2(x1/eps); integrate against
// the x2-extent (1 - x1) of the simplex.
double uEpsVolume2(double eps) { return 0.5 + eps * eps * (1.0 - std::cos(2.0 / eps)) / 4.0; }

// det = cos^2(x1/eps^2) / eps; same integral with eps^2 in place of eps and a
// 1/(2 eps) prefactor on (1 + cos(2 x1 / eps^2)).
double vEpsVolume2(double eps) {
    const double e2 = eps * eps;
    return (0.5 + e2 * e2 * (1.0 - std::cos(2.0 / e2)) / 4.0) / (2.0 * eps);
}

LipSimplex identitySimplex(std::size_t k) {
    return LipSimplex(makeChart("id_R^" + std::to_string(k), k, euclidean(k), [](const Point& x) { return x; }));
}

LipSimplex affineSimplex(const std::vector<Point>& vertices) { return LipSimplex(affineChart(vertices)); }

std::vector<Point> circleSamples(std::size_t n) {
    std::vector<Point> s;
    s.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        s.push_back({2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n)});
    return s;
}

C1Map tSin(double t, std::vector<Point> samples) {
    LipMap m{circle(2.0 * std::numbers::pi), euclidean(1),
             [t](const Point& x) { return Point{t * std::sin(x.at(0))}; }, std::move(samples), "t sin(x)"};
    return {std::move(m), [t](const Point& x) { return Point{t * std::cos(x.at(0))}; }};
}

C1Map tSinOverT(double t, std::vector<Point> samples) {
    LipMap m{circle(2.0 * std::numbers::pi), euclidean(1),
             [t](const Point& x) { return Point{t * std::sin(x.at(0) / t)}; }, std::move(samples), "t sin(x/t)"};
    return {std::move(m), [t](const Point& x) { return Point{std::cos(x.at(0) / t)}; }};
}

C1Map zeroC1(std::vector<Point> samples) {
    LipMap m{circle(2.0 * std::numbers::pi), euclidean(1), [](const Point&) { return Point{0.0}; },
             std::move(samples), "0"};
    return {std::move(m), [](const Point&) { return Point{0.0}; }};
}

}  // namespace metcur::families
