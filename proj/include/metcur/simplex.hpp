#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "metcur/metric.hpp"

namespace metcur {

/// x -> offset + matrix * x from R^in to R^out, matrix stored row-major.
/// Face inclusions and prism cells only ever produce small-integer entries, so
/// composing them is exact in floating point and equality can be tested
/// bitwise.
class AffineMap {
public:
    AffineMap() = default;
    AffineMap(std::size_t in, std::size_t out, std::vector<double> matrix, Point offset);

    static AffineMap identity(std::size_t dim);

    /// The affine map sending the standard vertices v_0 = 0, v_j = e_j of the
    /// corner simplex in R^{images.size()-1} to the given images, in order.
    static AffineMap fromVertexImages(const std::vector<Point>& images);

    std::size_t inDim() const { return in_; }
    std::size_t outDim() const { return out_; }
    const std::vector<double>& matrix() const { return matrix_; }
    const Point& offset() const { return offset_; }
    double entry(std::size_t row, std::size_t col) const { return matrix_[row * in_ + col]; }

    Point operator()(const Point& x) const;

    /// (*this) o inner.
    AffineMap after(const AffineMap& inner) const;

    /// (x, t) -> (A x, t).
    AffineMap timesInterval() const;

    /// Determinant of the linear part; requires inDim == outDim.
    double determinant() const;

    friend bool operator==(const AffineMap& a, const AffineMap& b) = default;
    friend bool operator<(const AffineMap& a, const AffineMap& b);

private:
    std::size_t in_ = 0;
    std::size_t out_ = 0;
    std::vector<double> matrix_;
    Point offset_;
};

/// One cell of the edgewise subdivision: a k-simplex given by its vertices.
struct SimplexCell {
    std::vector<Point> vertices;  // k+1 points in R^k
    Point centroid;
    double volume = 0.0;
};

/// The standard corner simplex {x in R^k : x_i >= 0, sum x_i <= 1}.
class SimplexDomain {
public:
    explicit SimplexDomain(std::size_t k) : k_(k) {}

    std::size_t dim() const { return k_; }

    /// 1/k!
    double volume() const;

    bool contains(const Point& x, double slack = 1e-12) const;

    /// Vertex v_j: the origin for j = 0 and e_j otherwise.
    Point vertex(std::size_t j) const;

    /// Lattice points {j/n : j in N^k, sum j <= n}. grid(n) is contained in
    /// grid(m) whenever n divides m.
    std::vector<Point> grid(std::size_t n) const;

    /// Index pairs of grid(n) that differ by one lattice step e_i or e_i - e_j,
    /// i.e. the edges of the subdivision.
    std::vector<std::pair<std::size_t, std::size_t>> gridEdges(std::size_t n) const;

    /// Calls visit(cell) for each of the n^k congruent cells of the edgewise
    /// subdivision with mesh 1/n, in a fixed order.
    template <class Visit>
    void forEachCell(std::size_t n, Visit&& visit) const;

    std::size_t cellCount(std::size_t n) const;

    /// Affine inclusion of Delta^{k-1} as the face opposite vertex i; vertex
    /// order is preserved.
    AffineMap faceInclusion(std::size_t i) const;

private:
    std::size_t k_;
};

namespace detail {
// Enumerates the cells of the order-simplex description of Delta^k. Cells are
// produced as vertex lists in corner coordinates.
void enumerateCells(std::size_t k, std::size_t n, const std::function<void(const SimplexCell&)>& visit);
}  // namespace detail

template <class Visit>
void SimplexDomain::forEachCell(std::size_t n, Visit&& visit) const {
    detail::enumerateCells(k_, n, [&](const SimplexCell& c) { visit(c); });
}

}  // namespace metcur
