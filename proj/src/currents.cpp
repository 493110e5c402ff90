#include "metcur/currents.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <sstream>

#include "metcur/errors.hpp"
#include "metcur/families.hpp"

namespace metcur {

TestForm TestForm::exteriorDerivative(double fLip) const {
    TestForm d;
    d.f = [](const Point&) { return 1.0; };
    d.fBound = 1.0;
    d.pis.reserve(pis.size() + 1);
    d.pis.push_back(f);
    d.pis.insert(d.pis.end(), pis.begin(), pis.end());
    d.piLip.push_back(fLip);
    d.piLip.insert(d.piLip.end(), piLip.begin(), piLip.end());
    return d;
}

TestForm TestForm::pullback(const PointMap& phi) const {
    TestForm p;
    p.f = [g = f, phi](const Point& x) { return g(phi(x)); };
    p.fBound = fBound;
    for (const auto& pi : pis) p.pis.push_back([pi, phi](const Point& x) { return pi(phi(x)); });
    p.piLip = piLip;
    return p;
}

ChartPtr makeChart(const std::string& name, std::size_t inDim, SpacePtr target, PointMap eval) {
    static std::atomic<std::uint64_t> serial{0};
    return std::make_shared<Chart>(
        Chart{name + "#" + std::to_string(serial.fetch_add(1)), inDim, std::move(target), std::move(eval)});
}

ChartPtr affineChart(const std::vector<Point>& vertices) {
    if (vertices.empty()) throw std::invalid_argument("affine simplex needs vertices");
    const AffineMap a = AffineMap::fromVertexImages(vertices);
    std::ostringstream name;
    name.precision(17);
    name << "affine[";
    for (const auto& v : vertices) {
        name << '(';
        for (double c : v) name << c << ' ';
        name << ')';
    }
    name << ']';
    // barycentric form, so that vertices are reproduced exactly and shared
    // vertices of neighbouring simplices cancel in the boundary
    return makeChart(name.str(), a.inDim(), euclidean(a.outDim()), [vertices](const Point& x) {
        if (x.size() + 1 != vertices.size()) throw Error(ErrorCode::DimensionMismatch, "affine chart input dimension");
        double l0 = 1.0;
        for (double c : x) l0 -= c;
        Point y(vertices[0].size());
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = l0 * vertices[0][i];
        for (std::size_t j = 0; j < x.size(); ++j)
            for (std::size_t i = 0; i < y.size(); ++i) y[i] += x[j] * vertices[j + 1][i];
        return y;
    });
}

ChartPtr cylinderChart(const ChartPtr& chart) {
    auto target = std::make_shared<ProductSpace>(chart->target, euclidean(1));
    const std::size_t m = chart->inDim;
    return std::make_shared<Chart>(Chart{"cyl(" + chart->key + ")", m + 1, target, [chart, target, m](const Point& x) {
                                             Point y(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(m));
                                             return target->join(chart->eval(y), Point{x[m]});
                                         }});
}

ChartPtr postCompose(const std::string& name, SpacePtr target, const PointMap& phi, const ChartPtr& chart) {
    return std::make_shared<Chart>(Chart{name + " o " + chart->key, chart->inDim, std::move(target),
                                         [phi, chart](const Point& x) { return phi(chart->eval(x)); }});
}

LipSimplex::LipSimplex(std::size_t k, ChartPtr chart, AffineMap pre)
    : k_(k), chart_(std::move(chart)), pre_(std::move(pre)) {
    if (pre_.inDim() != k_ || pre_.outDim() != chart_->inDim)
        throw Error(ErrorCode::DimensionMismatch, "precomposition does not match the chart");
    if (k_ == 0) point_ = chart_->eval(pre_.offset());
}

LipSimplex::LipSimplex(ChartPtr chart) : LipSimplex(chart->inDim, chart, AffineMap::identity(chart->inDim)) {}

LipSimplex LipSimplex::face(std::size_t i) const {
    return LipSimplex(k_ - 1, chart_, pre_.after(SimplexDomain(k_).faceInclusion(i)));
}

LipMap LipSimplex::asMap(std::size_t gridN) const {
    LipSimplex self = *this;
    return {euclidean(k_), chart_->target, [self](const Point& s) { return self(s); },
            SimplexDomain(k_).grid(gridN), chart_->key};
}

bool sameSimplex(const LipSimplex& a, const LipSimplex& b) {
    if (a.k_ != b.k_) return false;
    if (a.k_ == 0) return a.point_ == b.point_;
    return a.chart_->key == b.chart_->key && a.pre_ == b.pre_;
}

bool simplexLess(const LipSimplex& a, const LipSimplex& b) {
    if (a.k_ != b.k_) return a.k_ < b.k_;
    if (a.k_ == 0) return a.point_ < b.point_;
    if (a.chart_->key != b.chart_->key) return a.chart_->key < b.chart_->key;
    return a.pre_ < b.pre_;
}

MeasureChain::MeasureChain(std::size_t k, std::vector<ChainAtom> atoms, bool canonicalize)
    : k_(k), atoms_(std::move(atoms)) {
    for (const auto& a : atoms_)
        if (a.simplex.degree() != k_) throw Error(ErrorCode::DimensionMismatch, "atom degree differs from chain degree");
    if (canonicalize) *this = canonical();
}

MeasureChain MeasureChain::single(const LipSimplex& s, double weight) {
    return MeasureChain(s.degree(), {{s, weight}});
}

double MeasureChain::totalVariation() const {
    double s = 0.0;
    for (const auto& a : atoms_) s += std::abs(a.weight);
    return s;
}

MeasureChain MeasureChain::canonical() const {
    std::vector<ChainAtom> sorted = atoms_;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const ChainAtom& a, const ChainAtom& b) { return simplexLess(a.simplex, b.simplex); });
    MeasureChain out(k_);
    for (auto& a : sorted) {
        if (!out.atoms_.empty() && sameSimplex(out.atoms_.back().simplex, a.simplex))
            out.atoms_.back().weight += a.weight;
        else
            out.atoms_.push_back(std::move(a));
    }
    std::erase_if(out.atoms_, [](const ChainAtom& a) { return std::abs(a.weight) < SignedMeasure::zeroWeight; });
    return out;
}

MeasureChain MeasureChain::operator-() const { return -1.0 * (*this); }

MeasureChain operator+(const MeasureChain& a, const MeasureChain& b) {
    if (a.k_ != b.k_) throw Error(ErrorCode::DimensionMismatch, "adding chains of different degree");
    std::vector<ChainAtom> all = a.atoms_;
    all.insert(all.end(), b.atoms_.begin(), b.atoms_.end());
    return MeasureChain(a.k_, std::move(all));
}

MeasureChain operator-(const MeasureChain& a, const MeasureChain& b) { return a + (-b); }

MeasureChain operator*(double s, const MeasureChain& m) {
    std::vector<ChainAtom> all = m.atoms_;
    for (auto& a : all) a.weight *= s;
    return MeasureChain(m.k_, std::move(all));
}

bool formallyEqual(const MeasureChain& a, const MeasureChain& b, double tolerance) {
    if (a.degree() != b.degree()) return false;
    const MeasureChain d = a - b;
    for (const auto& atom : d.atoms())
        if (std::abs(atom.weight) > tolerance) return false;
    return true;
}

namespace {

// Neumaier-compensated running sum.
struct Accumulator {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

double determinant(std::vector<double>& a, std::size_t k) {
    double det = 1.0;
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < k; ++r)
            if (std::abs(a[r * k + c]) > std::abs(a[piv * k + c])) piv = r;
        if (a[piv * k + c] == 0.0) return 0.0;
        if (piv != c) {
            for (std::size_t j = 0; j < k; ++j) std::swap(a[c * k + j], a[piv * k + j]);
            det = -det;
        }
        const double p = a[c * k + c];
        det *= p;
        for (std::size_t r = c + 1; r < k; ++r) {
            const double f = a[r * k + c] / p;
            if (f == 0.0) continue;
            for (std::size_t j = c; j < k; ++j) a[r * k + j] -= f * a[c * k + j];
        }
    }
    return det;
}

double quadrature(const LipSimplex& sigma, const TestForm& form, std::size_t n) {
    const std::size_t k = sigma.degree();
    if (form.degree() != k) throw Error(ErrorCode::DimensionMismatch, "form degree differs from simplex degree");
    if (n == 0) throw std::invalid_argument("grid parameter must be positive");
    const double h = 1.0 / static_cast<double>(n);
    if (h < 1e-8) throw Error(ErrorCode::DegenerateStep, "mesh below the finite-difference noise floor");
    const double step = 0.5 * h;
    const SimplexDomain domain(k);

    Accumulator acc;
    std::vector<double> jac(k * k);
    domain.forEachCell(n, [&](const SimplexCell& cell) {
        const Point& c = cell.centroid;
        const Point center = sigma(c);
        const double fv = form.f(center);
        if (fv == 0.0) return;
        if (k == 0) {
            acc.add(fv);
            return;
        }
        Point xp = c, xm = c;
        for (std::size_t j = 0; j < k; ++j) {
            xp[j] = c[j] + step;
            xm[j] = c[j] - step;
            const bool upOk = domain.contains(xp);
            const bool downOk = domain.contains(xm);
            Point yp, ym;
            double denom;
            if (upOk && downOk) {
                yp = sigma(xp);
                ym = sigma(xm);
                denom = 2.0 * step;
            } else if (upOk) {
                yp = sigma(xp);
                ym = center;
                denom = step;
            } else if (downOk) {
                yp = center;
                ym = sigma(xm);
                denom = step;
            } else {
                yp = sigma(xp);
                ym = sigma(xm);
                denom = 2.0 * step;
            }
            for (std::size_t i = 0; i < k; ++i) jac[i * k + j] = (form.pis[i](yp) - form.pis[i](ym)) / denom;
            xp[j] = c[j];
            xm[j] = c[j];
        }
        acc.add(cell.volume * fv * determinant(jac, k));
    });
    return acc.value();
}

}  // namespace

CurrentValue evalSimplexCurrent(const LipSimplex& sigma, const TestForm& form, const Grid& grid) {
    CurrentValue v;
    v.n = grid.n;
    v.value = quadrature(sigma, form, grid.n);
    if (grid.refine && sigma.degree() > 0) {
        v.errorEstimate = std::abs(v.value - quadrature(sigma, form, 2 * grid.n));
        v.refined = true;
    } else if (sigma.degree() == 0) {
        v.refined = true;  // exact: a point evaluation
    }
    return v;
}

CurrentValue evalChainCurrent(const MeasureChain& mu, const TestForm& form, const Grid& grid) {
    if (form.degree() != mu.degree()) throw Error(ErrorCode::DimensionMismatch, "form degree differs from chain degree");
    CurrentValue total;
    total.n = grid.n;
    total.refined = grid.refine || mu.degree() == 0;
    Accumulator acc;
    for (const auto& a : mu.atoms()) {
        const CurrentValue v = evalSimplexCurrent(a.simplex, form, grid);
        acc.add(a.weight * v.value);
        total.errorEstimate += std::abs(a.weight) * v.errorEstimate;
    }
    total.value = acc.value();
    return total;
}

MeasureChain boundaryChain(const MeasureChain& mu, bool canonicalize) {
    const std::size_t k = mu.degree();
    if (k == 0) throw Error(ErrorCode::DegreeZero, "0-chains have no boundary");
    std::vector<ChainAtom> faces;
    faces.reserve(mu.atoms().size() * (k + 1));
    for (const auto& a : mu.atoms())
        for (std::size_t i = 0; i <= k; ++i)
            faces.push_back({a.simplex.face(i), (i % 2 == 0 ? 1.0 : -1.0) * a.weight});
    return MeasureChain(k - 1, std::move(faces), canonicalize);
}

MeasureChain pushforwardChain(const LipMap& phi, const MeasureChain& mu) {
    std::vector<ChainAtom> atoms;
    atoms.reserve(mu.atoms().size());
    for (const auto& a : mu.atoms()) {
        const auto chart = postCompose(phi.name, phi.target, phi.eval, a.simplex.chart());
        atoms.push_back({LipSimplex(mu.degree(), chart, a.simplex.pre()), a.weight});
    }
    return MeasureChain(mu.degree(), std::move(atoms));
}

IdentityGap boundaryCurrentIdentity(const MeasureChain& mu, const TestForm& form, double fLip, const Grid& grid) {
    if (mu.degree() == 0) throw Error(ErrorCode::DegreeZero, "0-chains have no boundary");
    if (form.degree() + 1 != mu.degree())
        throw Error(ErrorCode::DimensionMismatch, "boundary identity needs a form of degree k-1");
    IdentityGap g;
    if (mu.empty()) return g;
    const CurrentValue l = evalChainCurrent(mu, form.exteriorDerivative(fLip), grid);
    const CurrentValue r = evalChainCurrent(boundaryChain(mu), form, grid);
    g.lhs = l.value;
    g.rhs = r.value;
    g.lhsError = l.errorEstimate;
    g.rhsError = r.errorEstimate;
    g.gap = std::abs(g.lhs - g.rhs);
    return g;
}

MassBound massBoundCheck(const MeasureChain& mu, const TestForm& form, const Grid& grid, std::size_t lipGridN,
                         double safety) {
    const std::size_t k = mu.degree();
    if (form.degree() != k) throw Error(ErrorCode::DimensionMismatch, "form degree differs from chain degree");
    if (form.piLip.size() != k) throw std::invalid_argument("mass bound needs declared Lipschitz constants");
    MassBound mb;
    mb.lhsAbs = std::abs(evalChainCurrent(mu, form, Grid{grid.n, false}).value);

    double L = 0.0;
    if (k > 0) {
        const SimplexDomain domain(k);
        const SamplePlan edges(domain.gridEdges(lipGridN), "simplex-grid-edges");
        for (const auto& a : mu.atoms()) L = std::max(L, lipEstimate(a.simplex.asMap(lipGridN), edges));
    }
    L *= safety;
    mb.lipConstant = L;

    double factor = std::pow(L, static_cast<double>(k));
    for (double c : form.piLip) factor *= c;

    // int |f| d nu with nu the image of the quadrature measure under each atom.
    Accumulator integral;
    const SimplexDomain domain(k);
    for (const auto& a : mu.atoms()) {
        Accumulator cellSum;
        domain.forEachCell(grid.n, [&](const SimplexCell& cell) {
            cellSum.add(cell.volume * std::abs(form.f(a.simplex(cell.centroid))));
        });
        integral.add(std::abs(a.weight) * cellSum.value());
    }
    mb.rhsBound = factor * integral.value();
    return mb;
}

double augmentation(const MeasureChain& mu) {
    if (mu.degree() != 0) throw Error(ErrorCode::DegreeNotZero, "augmentation is defined on 0-chains");
    double s = 0.0;
    for (const auto& a : mu.atoms()) s += a.weight;
    return s;
}

SignedMeasure zeroChainMeasure(const MeasureChain& mu) {
    if (mu.degree() != 0) throw Error(ErrorCode::DegreeNotZero, "only 0-chains are measures on X");
    std::vector<Atom> atoms;
    for (const auto& a : mu.atoms()) atoms.push_back({a.simplex(Point{}), a.weight});
    return SignedMeasure(std::move(atoms));
}

MeasureChain measureAsZeroChain(const SignedMeasure& m, SpacePtr space) {
    std::vector<ChainAtom> atoms;
    for (const auto& a : m.atoms()) {
        Point p = a.point;
        // keyed by the coordinates: equal points share a chart, distinct ones never do
        std::ostringstream key;
        key.precision(17);
        key << "pt(";
        for (double c : p) key << c << ' ';
        key << ')';
        auto chart = std::make_shared<Chart>(Chart{key.str(), 0, space, [p](const Point&) { return p; }});
        atoms.push_back({LipSimplex(0, chart, AffineMap(0, 0, {}, {})), a.weight});
    }
    return MeasureChain(0, std::move(atoms));
}

ContinuityTable continuityDiagnostic(const SimplexFamily& family, const LipSimplex& limit, const TestForm& form,
                                     std::span<const double> params, const Grid& grid, std::size_t sampleGridN) {
    ContinuityTable table;
    table.limitValue = evalSimplexCurrent(limit, form, grid);
    const SamplePlan edges(SimplexDomain(limit.degree()).gridEdges(sampleGridN), "simplex-grid-edges");
    const LipMap limitMap = limit.asMap(sampleGridN);
    for (double t : params) {
        const LipSimplex s = family(t);
        ContinuityRow row;
        row.t = t;
        row.value = evalSimplexCurrent(s, form, grid);
        const LipMap m = s.asMap(sampleGridN);
        row.mt = mtDistance(m, limitMap, edges);
        row.uniformDist = uniformDistance(m, limitMap);
        table.rows.push_back(row);
    }
    return table;
}

std::size_t vEpsGrid(double eps) {
    const double n = std::ceil(2.0 / (eps * eps));
    return std::max<std::size_t>(64, static_cast<std::size_t>(n));
}

std::vector<NonIntegrabilityRow> nonIntegrabilityDiagnostic(std::span<const double> epsilons) {
    std::vector<NonIntegrabilityRow> rows;
    const TestForm vol = volumeForm(2);
    for (double eps : epsilons) {
        if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("eps must lie in (0, 1]");
        NonIntegrabilityRow r;
        r.eps = eps;
        r.n = vEpsGrid(eps);
        r.value = evalSimplexCurrent(families::vEps(eps), vol, Grid{r.n, false}).value;
        r.scaled = eps * r.value;
        rows.push_back(r);
    }
    return rows;
}

TestForm randomForm(std::size_t degree, std::size_t dim, std::uint64_t seed, bool affine) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto vec = [&] {
        Point v(dim);
        for (auto& x : v) x = u(rng);
        return v;
    };
    auto dot = [](const Point& a, const Point& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    };
    auto norm = [&](const Point& a) { return std::sqrt(dot(a, a)); };

    TestForm form;
    const double a0 = u(rng);
    const Point a = vec();
    const Point b = vec();
    form.fBound = std::abs(a0) + norm(a) * 4.0 + (affine ? 0.0 : 0.3);
    if (affine)
        form.f = [a0, a, dot](const Point& x) { return a0 + dot(a, x); };
    else
        form.f = [a0, a, b, dot](const Point& x) { return a0 + dot(a, x) + 0.3 * std::sin(dot(b, x)); };
    for (std::size_t i = 0; i < degree; ++i) {
        const Point c = vec();
        const Point d = vec();
        if (affine) {
            form.pis.push_back([c, dot](const Point& x) { return dot(c, x); });
            form.piLip.push_back(norm(c));
        } else {
            form.pis.push_back([c, d, dot](const Point& x) { return dot(c, x) + 0.2 * std::cos(dot(d, x)); });
            form.piLip.push_back(norm(c) + 0.2 * norm(d));
        }
    }
    return form;
}

TestForm volumeForm(std::size_t k) {
    TestForm form;
    form.f = [](const Point&) { return 1.0; };
    form.fBound = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
        form.pis.push_back([i](const Point& x) { return x[i]; });
        form.piLip.push_back(1.0);
    }
    return form;
}

}  // namespace metcur
