#include "metcur/prism.hpp"

#include <cmath>
#include <stdexcept>

#include "metcur/errors.hpp"

namespace metcur {

std::vector<PrismCell> prismCells(std::size_t k) {
    const SimplexDomain base(k);
    std::vector<PrismCell> cells;
    for (std::size_t i = 0; i <= k; ++i) {
        std::vector<Point> verts;
        for (std::size_t j = 0; j <= i; ++j) {
            Point w = base.vertex(j);
            w.push_back(0.0);
            verts.push_back(std::move(w));
        }
        for (std::size_t j = i; j <= k; ++j) {
            Point w = base.vertex(j);
            w.push_back(1.0);
            verts.push_back(std::move(w));
        }
        PrismCell cell;
        cell.index = i;
        cell.param = AffineMap::fromVertexImages(verts);
        const double det = cell.param.determinant();
        cell.orientation = det > 0 ? 1.0 : (det < 0 ? -1.0 : 0.0);
        cells.push_back(std::move(cell));
    }
    return cells;
}

std::string PrismConvention::describe() const {
    return std::string("dP ") + (boundarySign > 0 ? "+" : "-") + " Pd = i" + std::to_string(from) + "# - i" +
           std::to_string(to) + "#";
}

namespace {

std::vector<ChainAtom> prismAtoms(const LipSimplex& sigma, double weight) {
    const auto cyl = cylinderChart(sigma.chart());
    const AffineMap lifted = sigma.pre().timesInterval();
    std::vector<ChainAtom> atoms;
    for (const auto& cell : prismCells(sigma.degree())) {
        const double sign = (cell.index % 2 == 0) ? 1.0 : -1.0;
        atoms.push_back({LipSimplex(sigma.degree() + 1, cyl, lifted.after(cell.param)), sign * weight});
    }
    return atoms;
}

std::vector<ChainAtom> prismAtoms(const MeasureChain& mu) {
    std::vector<ChainAtom> all;
    for (const auto& a : mu.atoms()) {
        auto atoms = prismAtoms(a.simplex, a.weight);
        all.insert(all.end(), atoms.begin(), atoms.end());
    }
    return all;
}

void append(std::vector<ChainAtom>& to, const std::vector<ChainAtom>& from, double scale) {
    for (const auto& a : from) to.push_back({a.simplex, scale * a.weight});
}

// boundary(P sigma) + s P(boundary sigma) - (i_from sigma - i_to sigma), left
// uncanonicalized so that numerical evaluation sees every face.
struct IdentitySides {
    std::vector<ChainAtom> lhs;
    std::vector<ChainAtom> rhs;
};

IdentitySides identitySides(const LipSimplex& sigma, const PrismConvention& conv) {
    const std::size_t k = sigma.degree();
    IdentitySides sides;
    const MeasureChain prism(k + 1, prismAtoms(sigma, 1.0), false);
    append(sides.lhs, boundaryChain(prism, false).atoms(), 1.0);
    if (k > 0) {
        const MeasureChain bd = boundaryChain(MeasureChain(k, {{sigma, 1.0}}, false), false);
        append(sides.lhs, prismAtoms(bd), static_cast<double>(conv.boundarySign));
    }
    sides.rhs.push_back({endSimplex(sigma, conv.from), 1.0});
    sides.rhs.push_back({endSimplex(sigma, conv.to), -1.0});
    return sides;
}

}  // namespace

MeasureChain prismChain(const LipSimplex& sigma) {
    return MeasureChain(sigma.degree() + 1, prismAtoms(sigma, 1.0));
}

MeasureChain prismChain(const MeasureChain& mu) { return MeasureChain(mu.degree() + 1, prismAtoms(mu)); }

LipSimplex endSimplex(const LipSimplex& sigma, int t) {
    const std::size_t k = sigma.degree();
    std::vector<double> m((k + 1) * k, 0.0);
    for (std::size_t i = 0; i < k; ++i) m[i * k + i] = 1.0;
    Point off(k + 1, 0.0);
    off[k] = static_cast<double>(t);
    const AffineMap atHeight(k, k + 1, std::move(m), std::move(off));
    return LipSimplex(k, cylinderChart(sigma.chart()), sigma.pre().timesInterval().after(atHeight));
}

MeasureChain endChain(const MeasureChain& mu, int t) {
    std::vector<ChainAtom> atoms;
    for (const auto& a : mu.atoms()) atoms.push_back({endSimplex(a.simplex, t), a.weight});
    return MeasureChain(mu.degree(), std::move(atoms));
}

MeasureChain homotopyDefect(const LipSimplex& sigma, const PrismConvention& convention) {
    IdentitySides sides = identitySides(sigma, convention);
    append(sides.lhs, sides.rhs, -1.0);
    return MeasureChain(sigma.degree(), std::move(sides.lhs));
}

std::vector<PrismConvention> satisfiedConventions(const LipSimplex& sigma) {
    std::vector<PrismConvention> ok;
    for (int s : {1, -1})
        for (int from : {1, 0}) {
            const PrismConvention c{s, from, 1 - from};
            if (homotopyDefect(sigma, c).empty()) ok.push_back(c);
        }
    return ok;
}

const PrismConvention& calibratedConvention() {
    static const PrismConvention frozen = [] {
        const LipSimplex sigma(affineChart({{0.3, -0.2}, {1.1, 0.7}}));
        const auto ok = satisfiedConventions(sigma);
        if (ok.size() != 1) throw std::logic_error("prism sign calibration is ambiguous");
        return ok.front();
    }();
    return frozen;
}

IdentityGap homotopyIdentityCheck(const LipSimplex& sigma, const TestForm& form, const Grid& grid,
                                  const PrismConvention& convention) {
    if (form.degree() != sigma.degree())
        throw Error(ErrorCode::DimensionMismatch, "homotopy identity needs a form of the simplex degree");
    const IdentitySides sides = identitySides(sigma, convention);
    const std::size_t k = sigma.degree();
    const CurrentValue l = evalChainCurrent(MeasureChain(k, sides.lhs, false), form, grid);
    const CurrentValue r = evalChainCurrent(MeasureChain(k, sides.rhs, false), form, grid);
    IdentityGap g;
    g.lhs = l.value;
    g.rhs = r.value;
    g.lhsError = l.errorEstimate;
    g.rhsError = r.errorEstimate;
    g.gap = std::abs(g.lhs - g.rhs);
    return g;
}

MeasureChain lipschitzContractionTransport(const PointMap& homotopy, SpacePtr target, const MeasureChain& mu,
                                           double tolerance) {
    const std::size_t k = mu.degree();
    const double scale = std::max(1.0, mu.totalVariation());
    if (k == 0) {
        if (std::abs(augmentation(mu)) > tolerance * scale)
            throw Error(ErrorCode::NotACycle, "0-chain has nonzero total weight");
    } else {
        const MeasureChain bd = boundaryChain(mu);
        if (!bd.empty()) {
            const std::size_t dim = mu.atoms().front().simplex.target()->dimension();
            for (std::uint64_t seed = 0; seed < 5; ++seed) {
                const double v = evalChainCurrent(bd, randomForm(k - 1, dim, 9001 + seed, false), Grid{16, false}).value;
                if (std::abs(v) > tolerance * scale) throw Error(ErrorCode::NotACycle, "boundary does not vanish");
            }
        }
    }
    const PrismConvention& conv = calibratedConvention();
    // For a cycle: boundary(P mu) = i_from mu - i_to mu; pick the sign that
    // puts mu = h_0 mu with a plus.
    const double sign = conv.from == 1 ? -1.0 : 1.0;
    std::vector<ChainAtom> atoms;
    for (const auto& a : prismAtoms(mu)) {
        const auto chart = postCompose("h", target, homotopy, a.simplex.chart());
        atoms.push_back({LipSimplex(k + 1, chart, a.simplex.pre()), sign * a.weight});
    }
    return MeasureChain(k + 1, std::move(atoms));
}

}  // namespace metcur
