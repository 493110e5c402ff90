#include "metcur/simplex.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "metcur/errors.hpp"

namespace metcur {

AffineMap::AffineMap(std::size_t in, std::size_t out, std::vector<double> matrix, Point offset)
    : in_(in), out_(out), matrix_(std::move(matrix)), offset_(std::move(offset)) {
    if (matrix_.size() != in_ * out_ || offset_.size() != out_)
        throw Error(ErrorCode::DimensionMismatch, "affine map shape mismatch");
}

AffineMap AffineMap::identity(std::size_t dim) {
    std::vector<double> m(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) m[i * dim + i] = 1.0;
    return AffineMap(dim, dim, std::move(m), Point(dim, 0.0));
}

AffineMap AffineMap::fromVertexImages(const std::vector<Point>& images) {
    if (images.empty()) throw std::invalid_argument("an affine simplex needs at least one vertex");
    const std::size_t in = images.size() - 1;
    const std::size_t out = images.front().size();
    std::vector<double> m(in * out, 0.0);
    for (std::size_t j = 0; j < in; ++j) {
        if (images[j + 1].size() != out)
            throw Error(ErrorCode::DimensionMismatch, "vertex images have different dimensions");
        for (std::size_t r = 0; r < out; ++r) m[r * in + j] = images[j + 1][r] - images[0][r];
    }
    return AffineMap(in, out, std::move(m), images.front());
}

Point AffineMap::operator()(const Point& x) const {
    if (x.size() != in_) throw Error(ErrorCode::DimensionMismatch, "affine map input dimension");
    Point y = offset_;
    for (std::size_t r = 0; r < out_; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < in_; ++c) s += matrix_[r * in_ + c] * x[c];
        y[r] += s;
    }
    return y;
}

AffineMap AffineMap::after(const AffineMap& inner) const {
    if (inner.out_ != in_) throw Error(ErrorCode::DimensionMismatch, "affine composition shape");
    std::vector<double> m(out_ * inner.in_, 0.0);
    for (std::size_t r = 0; r < out_; ++r)
        for (std::size_t c = 0; c < inner.in_; ++c) {
            double s = 0.0;
            for (std::size_t j = 0; j < in_; ++j) s += matrix_[r * in_ + j] * inner.matrix_[j * inner.in_ + c];
            m[r * inner.in_ + c] = s;
        }
    return AffineMap(inner.in_, out_, std::move(m), (*this)(inner.offset_));
}

AffineMap AffineMap::timesInterval() const {
    const std::size_t in = in_ + 1;
    const std::size_t out = out_ + 1;
    std::vector<double> m(in * out, 0.0);
    for (std::size_t r = 0; r < out_; ++r)
        for (std::size_t c = 0; c < in_; ++c) m[r * in + c] = matrix_[r * in_ + c];
    m[out_ * in + in_] = 1.0;
    Point off = offset_;
    off.push_back(0.0);
    return AffineMap(in, out, std::move(m), std::move(off));
}

double AffineMap::determinant() const {
    if (in_ != out_) throw Error(ErrorCode::DimensionMismatch, "determinant of a non-square map");
    if (in_ == 0) return 1.0;
    Eigen::MatrixXd a(out_, in_);
    for (std::size_t r = 0; r < out_; ++r)
        for (std::size_t c = 0; c < in_; ++c) a(r, c) = matrix_[r * in_ + c];
    return a.determinant();
}

bool operator<(const AffineMap& a, const AffineMap& b) {
    return std::tie(a.in_, a.out_, a.matrix_, a.offset_) < std::tie(b.in_, b.out_, b.matrix_, b.offset_);
}

double SimplexDomain::volume() const {
    double f = 1.0;
    for (std::size_t i = 2; i <= k_; ++i) f *= static_cast<double>(i);
    return 1.0 / f;
}

bool SimplexDomain::contains(const Point& x, double slack) const {
    if (x.size() != k_) return false;
    double s = 0.0;
    for (double v : x) {
        if (v < -slack) return false;
        s += v;
    }
    return s <= 1.0 + slack;
}

Point SimplexDomain::vertex(std::size_t j) const {
    Point v(k_, 0.0);
    if (j > 0) v.at(j - 1) = 1.0;
    return v;
}

namespace {

void latticePoints(std::size_t k, std::size_t n, std::vector<std::vector<std::size_t>>& out) {
    std::vector<std::size_t> j(k, 0);
    // odometer over {j : sum j <= n}
    while (true) {
        out.push_back(j);
        if (k == 0) return;
        std::size_t pos = 0;
        while (true) {
            ++j[pos];
            const std::size_t sum = std::accumulate(j.begin(), j.end(), std::size_t{0});
            if (sum <= n) break;
            j[pos] = 0;
            if (++pos == k) return;
        }
    }
}

Point latticeToPoint(const std::vector<std::size_t>& j, std::size_t n) {
    Point p(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) p[i] = static_cast<double>(j[i]) / static_cast<double>(n);
    return p;
}

}  // namespace

std::vector<Point> SimplexDomain::grid(std::size_t n) const {
    if (n == 0) throw std::invalid_argument("grid parameter must be positive");
    std::vector<std::vector<std::size_t>> lattice;
    latticePoints(k_, n, lattice);
    std::vector<Point> pts;
    pts.reserve(lattice.size());
    for (const auto& j : lattice) pts.push_back(latticeToPoint(j, n));
    return pts;
}

std::vector<std::pair<std::size_t, std::size_t>> SimplexDomain::gridEdges(std::size_t n) const {
    std::vector<std::vector<std::size_t>> lattice;
    latticePoints(k_, n, lattice);
    std::map<std::vector<std::size_t>, std::size_t> index;
    for (std::size_t i = 0; i < lattice.size(); ++i) index.emplace(lattice[i], i);

    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t a = 0; a < lattice.size(); ++a) {
        for (std::size_t i = 0; i < k_; ++i) {
            auto up = lattice[a];
            ++up[i];
            if (auto it = index.find(up); it != index.end()) edges.emplace_back(a, it->second);
            for (std::size_t l = 0; l < k_; ++l) {
                if (l == i || up[l] == 0) continue;
                auto diag = up;
                --diag[l];
                if (auto it = index.find(diag); it != index.end() && it->second > a)
                    edges.emplace_back(a, it->second);
            }
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

std::size_t SimplexDomain::cellCount(std::size_t n) const {
    std::size_t c = 1;
    for (std::size_t i = 0; i < k_; ++i) c *= n;
    return c;
}

AffineMap SimplexDomain::faceInclusion(std::size_t i) const {
    if (k_ == 0) throw Error(ErrorCode::DegreeZero, "a point has no faces");
    if (i > k_) throw std::out_of_range("face index exceeds simplex dimension");
    std::vector<Point> images;
    for (std::size_t j = 0; j <= k_; ++j)
        if (j != i) images.push_back(vertex(j));
    return AffineMap::fromVertexImages(images);
}

namespace detail {

// Delta^k is linearly (det 1) identified with the order simplex
// {1 >= y_1 >= ... >= y_k >= 0} via x_j = y_j - y_{j+1}. Scaling by n, the
// Kuhn simplices of the unit-cube lattice lying inside n * order simplex are
// those with nonincreasing cube index c whose permutation keeps j before j+1
// whenever c_j = c_{j+1}. There are exactly n^k of them.
void enumerateCells(std::size_t k, std::size_t n, const std::function<void(const SimplexCell&)>& visit) {
    double factorial = 1.0;
    for (std::size_t i = 2; i <= k; ++i) factorial *= static_cast<double>(i);
    const double scale = 1.0 / static_cast<double>(n);
    double cellVolume = 1.0 / factorial;
    for (std::size_t i = 0; i < k; ++i) cellVolume *= scale;

    SimplexCell cell;
    if (k == 0) {
        cell.vertices = {Point{}};
        cell.centroid = Point{};
        cell.volume = 1.0;
        visit(cell);
        return;
    }

    std::vector<std::size_t> perm(k);
    std::vector<std::vector<std::size_t>> perms;
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    do perms.push_back(perm);
    while (std::next_permutation(perm.begin(), perm.end()));

    auto toCorner = [&](const std::vector<double>& y) {
        Point x(k);
        for (std::size_t j = 0; j < k; ++j) x[j] = (y[j] - (j + 1 < k ? y[j + 1] : 0.0)) * scale;
        return x;
    };

    std::vector<std::size_t> c(k, 0);
    std::vector<double> y(k);
    cell.vertices.assign(k + 1, Point(k));
    cell.centroid.assign(k, 0.0);
    cell.volume = cellVolume;

    std::function<void(std::size_t, std::size_t)> recurse = [&](std::size_t pos, std::size_t maxValue) {
        if (pos == k) {
            for (const auto& p : perms) {
                bool ok = true;
                for (std::size_t j = 0; j + 1 < k && ok; ++j) {
                    if (c[j] != c[j + 1]) continue;
                    const auto a = std::find(p.begin(), p.end(), j) - p.begin();
                    const auto b = std::find(p.begin(), p.end(), j + 1) - p.begin();
                    ok = a < b;
                }
                if (!ok) continue;
                for (std::size_t j = 0; j < k; ++j) y[j] = static_cast<double>(c[j]);
                cell.vertices[0] = toCorner(y);
                for (std::size_t v = 0; v < k; ++v) {
                    y[p[v]] += 1.0;
                    cell.vertices[v + 1] = toCorner(y);
                }
                std::fill(cell.centroid.begin(), cell.centroid.end(), 0.0);
                for (const auto& vert : cell.vertices)
                    for (std::size_t j = 0; j < k; ++j) cell.centroid[j] += vert[j];
                for (auto& v : cell.centroid) v /= static_cast<double>(k + 1);
                visit(cell);
            }
            return;
        }
        for (std::size_t v = 0; v <= maxValue; ++v) {
            c[pos] = v;
            recurse(pos + 1, v);
        }
    };
    recurse(0, n - 1);
}

}  // namespace detail

}  // namespace metcur
