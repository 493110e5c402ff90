#include "metcur/homology.hpp"

#include <algorithm>

#include "metcur/errors.hpp"

namespace metcur {

FiniteComplex::FiniteComplex(std::vector<std::size_t> dims, std::vector<Eigen::MatrixXd> boundaries)
    : dims_(std::move(dims)), d_(std::move(boundaries)) {
    if (dims_.empty()) throw Error(ErrorCode::DimensionMismatch, "complex needs at least degree 0");
    if (d_.size() != dims_.size() - 1) throw Error(ErrorCode::DimensionMismatch, "one boundary per positive degree");
    for (std::size_t m = 1; m < dims_.size(); ++m) {
        const auto& b = d_[m - 1];
        if (static_cast<std::size_t>(b.rows()) != dims_[m - 1] || static_cast<std::size_t>(b.cols()) != dims_[m])
            throw Error(ErrorCode::DimensionMismatch, "boundary " + std::to_string(m) + " has the wrong shape");
    }
}

double FiniteComplex::squareDefect() const {
    double worst = 0.0;
    for (std::size_t m = 1; m + 1 < dims_.size(); ++m) {
        const Eigen::MatrixXd p = d_[m - 1] * d_[m];
        if (p.size() > 0) worst = std::max(worst, p.cwiseAbs().maxCoeff());
    }
    return worst;
}

RankInfo numericalRank(const Eigen::MatrixXd& m, double relThreshold) {
    RankInfo info;
    if (m.size() == 0) return info;
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    info.sigmaMax = s.size() > 0 ? s(0) : 0.0;
    if (info.sigmaMax == 0.0) return info;
    const double cut = relThreshold * info.sigmaMax;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) >= cut) {
            ++info.rank;
            info.smallestKept = s(i);
        } else {
            info.largestDropped = std::max(info.largestDropped, s(i));
        }
    }
    return info;
}

HomologyResult homology(const FiniteComplex& c, bool reduced, double complexTolerance) {
    double scale = 1.0;
    for (std::size_t m = 1; m <= c.topDegree(); ++m)
        if (c.boundary(m).size() > 0) scale = std::max(scale, c.boundary(m).cwiseAbs().maxCoeff());
    if (c.squareDefect() > complexTolerance * scale * scale)
        throw Error(ErrorCode::NotAComplex, "boundary squared does not vanish");

    HomologyResult out;
    out.reduced = reduced;
    std::vector<std::size_t> rank(c.topDegree() + 2, 0);  // rank[m] of boundary_m; rank[0] augmentation
    for (std::size_t m = 1; m <= c.topDegree(); ++m) {
        out.ranks.push_back(numericalRank(c.boundary(m)));
        rank[m] = out.ranks.back().rank;
    }
    if (reduced) {
        out.ranks.push_back(numericalRank(Eigen::MatrixXd::Ones(1, static_cast<Eigen::Index>(c.dim(0)))));
        rank[0] = out.ranks.back().rank;
    }
    for (std::size_t m = 0; m <= c.topDegree(); ++m) {
        const std::size_t kernel = c.dim(m) - rank[m];
        out.betti.push_back(kernel - rank[m + 1]);
    }
    return out;
}

FiniteComplex alternatingComplex(std::size_t n, std::size_t top) {
    if (top % 2 != 0) throw Error(ErrorCode::DimensionMismatch, "top degree must be even");
    const auto N = static_cast<Eigen::Index>(n);
    std::vector<Eigen::MatrixXd> d;
    for (std::size_t k = 1; k <= top; ++k)
        d.push_back(k % 2 == 0 ? Eigen::MatrixXd(Eigen::MatrixXd::Identity(N, N)) : Eigen::MatrixXd(Eigen::MatrixXd::Zero(N, N)));
    return FiniteComplex(std::vector<std::size_t>(top + 1, n), std::move(d));
}

FiniteComplex simplicialCircle() {
    Eigen::MatrixXd d1(3, 3);
    // edges [0,1], [1,2], [0,2]
    d1 << -1, 0, -1,
           1, -1, 0,
           0, 1, 1;
    return FiniteComplex({3, 3}, {d1});
}

}  // namespace metcur
