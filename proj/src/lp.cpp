#include "metcur/lp.hpp"

#include <algorithm>
#include <limits>
#include <vector>

#include "metcur/errors.hpp"

namespace metcur::lp {

Solution maximize(const Problem& problem, double tolerance) {
    const auto m = problem.A.rows();
    const auto n = problem.A.cols();
    if (problem.b.size() != m || problem.c.size() != n)
        throw Error(ErrorCode::DimensionMismatch, "LP shapes do not agree");
    if (m > 0 && problem.b.minCoeff() < 0.0)
        throw Error(ErrorCode::LpNumerics, "right-hand side must be nonnegative");

    // Row i reads  basic_i + sum_j T(i,j) nonbasic_j = T(i,n); the last row is
    // the objective  z + sum_j d_j nonbasic_j = value  with d = -c.
    Eigen::MatrixXd T(m + 1, n + 1);
    T.topLeftCorner(m, n) = problem.A;
    T.topRightCorner(m, 1) = problem.b;
    T.bottomLeftCorner(1, n) = -problem.c.transpose();
    T(m, n) = 0.0;

    // Labels: structural variables 0..n-1, slacks n..n+m-1.
    std::vector<Eigen::Index> basic(m), nonbasic(n);
    for (Eigen::Index i = 0; i < m; ++i) basic[i] = n + i;
    for (Eigen::Index j = 0; j < n; ++j) nonbasic[j] = j;

    const double scale = 1.0 + (n > 0 ? problem.c.cwiseAbs().maxCoeff() : 0.0);
    const std::size_t budget = 50 * static_cast<std::size_t>(m + n) + 1000;

    Solution sol;
    while (true) {
        Eigen::Index enter = -1;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (T(m, j) < -tolerance * scale && (enter < 0 || nonbasic[j] < nonbasic[enter])) enter = j;
        }
        if (enter < 0) break;

        Eigen::Index leave = -1;
        double bestRatio = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < m; ++i) {
            const double a = T(i, enter);
            if (a <= tolerance) continue;
            const double ratio = T(i, n) / a;
            if (leave < 0 || ratio < bestRatio - tolerance) {
                leave = i;
                bestRatio = ratio;
            } else if (ratio <= bestRatio + tolerance && basic[i] < basic[leave]) {
                leave = i;
                bestRatio = std::min(bestRatio, ratio);
            }
        }
        if (leave < 0) throw Error(ErrorCode::LpNumerics, "LP is unbounded");

        const double p = T(leave, enter);
        const Eigen::VectorXd pivotCol = T.col(enter);
        const Eigen::RowVectorXd pivotRow = T.row(leave) / p;
        T -= pivotCol * pivotRow;
        T.row(leave) = pivotRow;
        T.col(enter) = -pivotCol / p;
        T(leave, enter) = 1.0 / p;
        std::swap(basic[leave], nonbasic[enter]);

        if (++sol.pivots > budget) throw Error(ErrorCode::LpNumerics, "pivot budget exhausted");
    }

    sol.x = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < m; ++i)
        if (basic[i] < n) sol.x(basic[i]) = T(i, n);
    sol.objective = T(m, n);
    return sol;
}

}  // namespace metcur::lp
