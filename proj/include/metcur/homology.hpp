#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace metcur {

/// C_0 <- C_1 <- ... <- C_N with dims[m] = dim C_m and d[m-1] = boundary_m
/// of shape dims[m-1] x dims[m].
class FiniteComplex {
public:
    FiniteComplex(std::vector<std::size_t> dims, std::vector<Eigen::MatrixXd> boundaries);

    std::size_t topDegree() const { return dims_.size() - 1; }
    std::size_t dim(std::size_t m) const { return dims_.at(m); }
    const std::vector<std::size_t>& dims() const { return dims_; }
    /// boundary_m for 1 <= m <= topDegree.
    const Eigen::MatrixXd& boundary(std::size_t m) const { return d_.at(m - 1); }

    /// max |boundary_m boundary_{m+1}| over m.
    double squareDefect() const;

private:
    std::vector<std::size_t> dims_;
    std::vector<Eigen::MatrixXd> d_;
};

struct RankInfo {
    std::size_t rank = 0;
    double sigmaMax = 0.0;
    double smallestKept = 0.0;
    double largestDropped = 0.0;
};

/// Singular values below relThreshold * sigma_max count as zero.
RankInfo numericalRank(const Eigen::MatrixXd& m, double relThreshold = 1e-8);

struct HomologyResult {
    std::vector<std::size_t> betti;
    std::vector<RankInfo> ranks;  // ranks[m-1] for boundary_m; augmentation last when reduced
    bool reduced = false;
};

HomologyResult homology(const FiniteComplex& complex, bool reduced = false, double complexTolerance = 1e-10);

/// R^n in every degree 0..top, boundary_k = 0 for odd k and the identity for
/// even k. top must be even so the truncation adds no spurious class.
FiniteComplex alternatingComplex(std::size_t n, std::size_t top);

/// Three vertices, three edges.
FiniteComplex simplicialCircle();

}  // namespace metcur
