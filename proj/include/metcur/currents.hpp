#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "metcur/free_space.hpp"
#include "metcur/lip_topology.hpp"
#include "metcur/lipmap.hpp"
#include "metcur/simplex.hpp"

namespace metcur {

using ScalarFn = std::function<double(const Point&)>;

/// f d pi_1 ^ ... ^ d pi_k. The declared constants are upper bounds used by
/// the mass estimate.
struct TestForm {
    ScalarFn f;
    std::vector<ScalarFn> pis;
    double fBound = 1.0;
    std::vector<double> piLip;

    std::size_t degree() const { return pis.size(); }

    /// 1 df ^ dpi_1 ^ ... ^ dpi_k, the form paired with the boundary.
    TestForm exteriorDerivative(double fLip) const;

    /// (f o phi) d(pi o phi)
    TestForm pullback(const PointMap& phi) const;
};

/// A map from R^m (at least on the standard simplex) into a metric space,
/// identified by a key. Charts with equal keys must be the same map.
struct Chart {
    std::string key;
    std::size_t inDim = 0;
    SpacePtr target;
    PointMap eval;
};

using ChartPtr = std::shared_ptr<const Chart>;

/// Creates a chart whose key is `name` made unique with a serial number.
ChartPtr makeChart(const std::string& name, std::size_t inDim, SpacePtr target, PointMap eval);

/// Chart of the affine simplex with the given vertices in R^d.
ChartPtr affineChart(const std::vector<Point>& vertices);

/// (y, t) -> (chart(y), t) into target x R.
ChartPtr cylinderChart(const ChartPtr& chart);

/// x -> phi(chart(x)); key "name o key" so that pushing forward commutes
/// formally with taking faces.
ChartPtr postCompose(const std::string& name, SpacePtr target, const PointMap& phi, const ChartPtr& chart);

/// A Lipschitz k-simplex s -> chart(pre(s)) on the standard simplex.
class LipSimplex {
public:
    LipSimplex(std::size_t k, ChartPtr chart, AffineMap pre);
    /// chart restricted to Delta^k (pre = identity).
    explicit LipSimplex(ChartPtr chart);

    std::size_t degree() const { return k_; }
    const ChartPtr& chart() const { return chart_; }
    const AffineMap& pre() const { return pre_; }
    const SpacePtr& target() const { return chart_->target; }

    Point operator()(const Point& s) const { return chart_->eval(pre_(s)); }

    /// The i-th face, sigma o (affine inclusion opposite vertex i).
    LipSimplex face(std::size_t i) const;

    /// As a LipMap on Delta^k sampled at grid(n).
    LipMap asMap(std::size_t gridN) const;

    /// Total order used to merge atoms. Degree-0 simplices compare by the
    /// point they evaluate to, since a 0-simplex is a point.
    friend bool sameSimplex(const LipSimplex& a, const LipSimplex& b);
    friend bool simplexLess(const LipSimplex& a, const LipSimplex& b);

private:
    std::size_t k_;
    ChartPtr chart_;
    AffineMap pre_;
    Point point_;  // cached value for k = 0
};

struct ChainAtom {
    LipSimplex simplex;
    double weight = 0.0;
};

/// Finitely supported measure on Lip(Delta^k, X).
class MeasureChain {
public:
    explicit MeasureChain(std::size_t k) : k_(k) {}
    MeasureChain(std::size_t k, std::vector<ChainAtom> atoms, bool canonicalize = true);

    static MeasureChain single(const LipSimplex& s, double weight = 1.0);

    std::size_t degree() const { return k_; }
    const std::vector<ChainAtom>& atoms() const { return atoms_; }
    bool empty() const { return atoms_.empty(); }
    double totalVariation() const;

    /// Merge identical simplices and drop weights below 1e-15.
    MeasureChain canonical() const;

    MeasureChain operator-() const;
    friend MeasureChain operator+(const MeasureChain& a, const MeasureChain& b);
    friend MeasureChain operator-(const MeasureChain& a, const MeasureChain& b);
    friend MeasureChain operator*(double s, const MeasureChain& m);

private:
    std::size_t k_;
    std::vector<ChainAtom> atoms_;
};

/// True when both chains canonicalize to the same atoms with equal weights.
bool formallyEqual(const MeasureChain& a, const MeasureChain& b, double tolerance = 0.0);

struct Grid {
    std::size_t n = 32;   // mesh 1/n
    bool refine = true;   // also evaluate at 2n for the error estimate
};

struct CurrentValue {
    double value = 0.0;
    double errorEstimate = 0.0;  // |value(n) - value(2n)| when refined
    std::size_t n = 0;
    bool refined = false;
};

/// Midpoint rule on the edgewise subdivision of Delta^k; the Jacobian of
/// pi o sigma comes from central differences with step h/2 (one-sided where
/// the central stencil leaves the simplex). Throws DegenerateStep below
/// h = 1e-8.
CurrentValue evalSimplexCurrent(const LipSimplex& sigma, const TestForm& form, const Grid& grid);

CurrentValue evalChainCurrent(const MeasureChain& mu, const TestForm& form, const Grid& grid);

/// sum_i (-1)^i r_i# ; DegreeZero for 0-chains.
MeasureChain boundaryChain(const MeasureChain& mu, bool canonicalize = true);

MeasureChain pushforwardChain(const LipMap& phi, const MeasureChain& mu);

struct IdentityGap {
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
    double lhsError = 0.0;
    double rhsError = 0.0;
};

/// lhs = T^mu(1 df ^ dpi), rhs = T^{boundary mu}(f dpi).
IdentityGap boundaryCurrentIdentity(const MeasureChain& mu, const TestForm& form, double fLip, const Grid& grid);

struct MassBound {
    double lhsAbs = 0.0;
    double rhsBound = 0.0;
    double lipConstant = 0.0;  // L, already inflated
    bool holds() const { return lhsAbs <= rhsBound; }
};

/// |T^mu(f dpi)| <= L^k prod Lip(pi_i) int |f| dnu with L the inflated
/// sampled Lipschitz constant over the atoms and nu the image of the
/// quadrature measure.
MassBound massBoundCheck(const MeasureChain& mu, const TestForm& form, const Grid& grid,
                         std::size_t lipGridN = 64, double safety = 1.1);

/// mu(X) for 0-chains; DegreeNotZero otherwise.
double augmentation(const MeasureChain& mu);

/// The 0-chain as a signed measure on X.
SignedMeasure zeroChainMeasure(const MeasureChain& mu);
MeasureChain measureAsZeroChain(const SignedMeasure& m, SpacePtr space);

using SimplexFamily = std::function<LipSimplex(double)>;

struct ContinuityRow {
    double t = 0.0;
    CurrentValue value;
    MtDistanceReport mt;
    double uniformDist = 0.0;
};

struct ContinuityTable {
    std::vector<ContinuityRow> rows;
    CurrentValue limitValue;
};

ContinuityTable continuityDiagnostic(const SimplexFamily& family, const LipSimplex& limit, const TestForm& form,
                                     std::span<const double> params, const Grid& grid, std::size_t sampleGridN);

struct NonIntegrabilityRow {
    double eps = 0.0;
    double value = 0.0;
    double scaled = 0.0;  // eps * value
    std::size_t n = 0;
};

/// [v_eps](1 d id) on Delta^2 for each eps, with a grid fine enough to
/// resolve the eps^2 oscillation.
std::vector<NonIntegrabilityRow> nonIntegrabilityDiagnostic(std::span<const double> epsilons);

/// Grid used for v_eps: n ~ 2 / eps^2, at least 64.
std::size_t vEpsGrid(double eps);

/// Random smooth test form of the given degree on R^dim, deterministic in
/// the seed. Affine when `affine` is set.
TestForm randomForm(std::size_t degree, std::size_t dim, std::uint64_t seed, bool affine);

/// 1 d x_1 ^ ... ^ d x_k on R^k.
TestForm volumeForm(std::size_t k);

}  // namespace metcur
