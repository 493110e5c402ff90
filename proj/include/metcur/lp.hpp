#pragma once

#include <Eigen/Dense>
#include <cstddef>

namespace metcur::lp {

/// maximize c^T x  subject to  A x <= b, x >= 0, with b >= 0 so that the
/// origin is feasible.
struct Problem {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    Eigen::VectorXd c;
};

struct Solution {
    Eigen::VectorXd x;
    double objective = 0.0;
    std::size_t pivots = 0;
};

/// Dense simplex on the condensed (Tucker) tableau with Bland's rule, so the
/// pivot sequence is fully determined by the input. Throws Error(LpNumerics)
/// when b has a negative entry, the problem is unbounded, or the pivot budget
/// runs out.
Solution maximize(const Problem& problem, double tolerance = 1e-12);

}  // namespace metcur::lp
