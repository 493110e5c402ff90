#include "metcur/suites.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "metcur/cosheaf.hpp"
#include "metcur/errors.hpp"
#include "metcur/families.hpp"
#include "metcur/free_space.hpp"
#include "metcur/homology.hpp"
#include "metcur/lip_topology.hpp"
#include "metcur/prism.hpp"

#ifndef METCUR_GIT_HASH
#define METCUR_GIT_HASH "unknown"
#endif

namespace metcur {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

Point randomPoint(Rng& rng, std::size_t dim, double a = -1.0, double b = 1.0) {
    Point p(dim);
    for (auto& x : p) x = uniform(rng, a, b);
    return p;
}

double number(const Json& p, const char* key) { return p.at(key).get<double>(); }
std::size_t count(const Json& p, const char* key) { return p.at(key).get<std::size_t>(); }
std::vector<double> numbers(const Json& p, const char* key) { return p.at(key).get<std::vector<double>>(); }

struct Builder {
    Report& r;

    void row(std::vector<double> values) { r.rows.push_back(std::move(values)); }

    // pass iff measured <= tolerance
    void atMost(const std::string& check, const std::string& invariant, double measured, double tolerance) {
        r.verdicts.push_back({check, invariant, measured <= tolerance, measured, tolerance});
    }
    // pass iff measured >= tolerance
    void atLeast(const std::string& check, const std::string& invariant, double measured, double tolerance) {
        r.verdicts.push_back({check, invariant, measured >= tolerance, measured, tolerance});
    }
    void holds(const std::string& check, const std::string& invariant, bool ok) {
        r.verdicts.push_back({check, invariant, ok, ok ? 1.0 : 0.0, 1.0});
    }
};

// x_i + 0.2 sin(2 x_{i+1}) on R^k; k = 0 gives a fixed point of R.
LipSimplex smoothSimplex(std::size_t k, std::uint64_t seed) {
    Rng rng(seed);
    const double phase = uniform(rng, 0.0, 1.0);
    if (k == 0) return LipSimplex(makeChart("point", 0, euclidean(1), [phase](const Point&) { return Point{phase}; }));
    return LipSimplex(makeChart("bent", k, euclidean(k), [k, phase](const Point& x) {
        Point y(x);
        for (std::size_t i = 0; i < k; ++i) y[i] += 0.2 * std::sin(2.0 * x[(i + 1) % k] + phase);
        return y;
    }));
}

LipSimplex randomAffineSimplex(std::size_t k, std::size_t dim, Rng& rng) {
    std::vector<Point> v;
    for (std::size_t i = 0; i <= k; ++i) v.push_back(randomPoint(rng, dim));
    return families::affineSimplex(v);
}

// --- homotopy-identity -------------------------------------------------------

void runHomotopy(const Scenario& s, Report& r) {
    Builder b{r};
    const auto& conv = calibratedConvention();
    r.notes["convention"] = conv.describe();
    r.notes["smooth_tolerance"] = "10 * (lhs refinement error + rhs refinement error) + 1e-12";
    Rng rng(s.seed);
    double affineWorst = 0.0;
    double smoothWorstExcess = -std::numeric_limits<double>::infinity();
    bool formal = true;
    for (double kd : numbers(s.params, "degrees")) {
        const auto k = static_cast<std::size_t>(kd);
        const std::size_t dim = std::max<std::size_t>(k, 1);
        for (std::size_t j = 0; j < count(s.params, "forms"); ++j) {
            const std::uint64_t formSeed = s.seed * 7919 + 101 * k + j;
            const LipSimplex affine = randomAffineSimplex(k, dim, rng);
            formal = formal && homotopyDefect(affine, conv).empty();
            const IdentityGap ga = homotopyIdentityCheck(affine, randomForm(k, dim + 1, formSeed, true), s.grid, conv);
            affineWorst = std::max(affineWorst, ga.gap);
            b.row({static_cast<double>(k), static_cast<double>(j), 0.0, ga.lhs, ga.rhs, ga.gap, 1e-9});

            const LipSimplex smooth = smoothSimplex(k, formSeed);
            formal = formal && homotopyDefect(smooth, conv).empty();
            const IdentityGap gs = homotopyIdentityCheck(smooth, randomForm(k, dim + 1, formSeed, false), s.grid, conv);
            const double tol = 10.0 * (gs.lhsError + gs.rhsError) + 1e-12;
            smoothWorstExcess = std::max(smoothWorstExcess, gs.gap - tol);
            b.row({static_cast<double>(k), static_cast<double>(j), 1.0, gs.lhs, gs.rhs, gs.gap, tol});
        }
    }
    b.holds("formal_identity", "prism: homotopy identity holds formally under the calibrated convention", formal);
    b.atMost("affine_gap", "prism: homotopy identity on affine data", affineWorst, 1e-9);
    b.atMost("smooth_gap_minus_tolerance", "prism: homotopy identity on smooth data within refinement error",
             smoothWorstExcess, 0.0);
}

// --- boundary-identity -------------------------------------------------------

void runBoundary(const Scenario& s, Report& r) {
    Builder b{r};
    Rng rng(s.seed);
    const std::size_t forms = count(s.params, "forms");

    double affineWorst = 0.0;
    for (double kd : numbers(s.params, "affine_degrees")) {
        const auto k = static_cast<std::size_t>(kd);
        for (std::size_t j = 0; j < forms; ++j) {
            const auto mu = MeasureChain::single(randomAffineSimplex(k, k, rng));
            const auto g = boundaryCurrentIdentity(mu, randomForm(k - 1, k, s.seed * 31 + 7 * k + j, true), 1.0,
                                                   s.grid);
            affineWorst = std::max(affineWorst, g.gap);
            b.row({0.0, static_cast<double>(k), static_cast<double>(s.grid.n), g.lhs, g.rhs, g.gap});
        }
    }
    b.atMost("affine_gap", "currents: boundary of T^mu equals T of the boundary chain (affine data)", affineWorst,
             1e-6);

    const auto smooth = MeasureChain::single(families::uEps(number(s.params, "smooth_eps"), 2));
    bool decreasing = true;
    for (std::size_t j = 0; j < forms; ++j) {
        const TestForm f = randomForm(1, 2, s.seed * 131 + j, false);
        double previous = std::numeric_limits<double>::infinity();
        for (double nd : numbers(s.params, "smooth_grids")) {
            const auto n = static_cast<std::size_t>(nd);
            const auto g = boundaryCurrentIdentity(smooth, f, 1.0, Grid{n, false});
            decreasing = decreasing && g.gap < previous;
            previous = g.gap;
            b.row({1.0, 2.0, nd, g.lhs, g.rhs, g.gap});
        }
    }
    b.holds("smooth_gap_decreasing", "currents: boundary identity gap decreases under refinement", decreasing);

    bool formal = true;
    double numericWorst = 0.0;
    for (double kd : numbers(s.params, "dd_degrees")) {
        const auto k = static_cast<std::size_t>(kd);
        std::vector<ChainAtom> atoms;
        atoms.push_back({randomAffineSimplex(k, k, rng), uniform(rng, -2.0, 2.0)});
        atoms.push_back({smoothSimplex(k, s.seed + k), uniform(rng, -2.0, 2.0)});
        const MeasureChain mu(k, atoms);
        const MeasureChain dd = boundaryChain(boundaryChain(mu));
        formal = formal && dd.empty();
        b.row({2.0, kd, 0.0, static_cast<double>(dd.atoms().size()), 0.0, dd.totalVariation()});
        const MeasureChain ddRaw = boundaryChain(boundaryChain(mu, false), false);
        for (std::size_t j = 0; j < 5; ++j) {
            const auto v = evalChainCurrent(ddRaw, randomForm(k - 2, k, s.seed * 17 + j, false), s.grid);
            numericWorst = std::max(numericWorst, std::abs(v.value));
            b.row({3.0, kd, static_cast<double>(s.grid.n), v.value, 0.0, std::abs(v.value)});
        }
    }
    b.holds("dd_formal", "currents: boundary of boundary cancels formally", formal);
    b.atMost("dd_numeric", "currents: boundary of boundary evaluates to zero", numericWorst, 1e-8);
}

// --- u-eps -------------------------------------------------------------------

void runUEps(const Scenario& s, Report& r) {
    Builder b{r};
    const auto k = count(s.params, "k");
    double fact = 1.0;
    for (std::size_t i = 2; i <= k; ++i) fact *= static_cast<double>(i);
    const double volume = 1.0 / fact;
    const double limit = evalSimplexCurrent(families::uEps(0.0, k), volumeForm(k), Grid{64, false}).value;
    r.notes["limit_value"] = limit;
    b.atMost("limit_value", "currents: the compact-open limit u_0 carries zero current", std::abs(limit), 0.0);
    const double qf = number(s.params, "quad_grid_factor");
    const double lf = number(s.params, "lip_grid_factor");
    for (double eps : numbers(s.params, "eps")) {
        const auto n = std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(qf / eps)));
        const auto m = std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil(lf / eps)));
        const LipSimplex u = families::uEps(eps, k);
        const double value = evalSimplexCurrent(u, volumeForm(k), Grid{n, false}).value;
        const LipMap um = u.asMap(m);
        const double lip = lipEstimate(um, SamplePlan(SimplexDomain(k).gridEdges(m)));
        const double unif = uniformDistance(um, families::uEps(0.0, k).asMap(m));
        const double closed = k == 2 ? families::uEpsVolume2(eps) : std::numeric_limits<double>::quiet_NaN();
        const double bound = std::sqrt(2.0 / eps);
        b.row({eps, static_cast<double>(n), value, closed, lip, bound, unif});
        std::ostringstream tag;
        tag << "eps=" << eps;
        b.atMost("value_rel_dev(" + tag.str() + ")", "currents: det of grad u_eps tends weakly to 1",
                 std::abs(value - volume) / volume, 0.05);
        b.atLeast("lip_over_bound(" + tag.str() + ")", "lip-topology: Lip(u_eps) grows like sqrt(2/eps)",
                  lip / bound, 0.9);
    }
}

// --- v-eps -------------------------------------------------------------------

void runVEps(const Scenario& s, Report& r) {
    Builder b{r};
    const auto eps = numbers(s.params, "eps");
    const auto rows = nonIntegrabilityDiagnostic(eps);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, sum = 0.0, closedWorst = 0.0;
    for (const auto& row : rows) {
        const double closed = families::vEpsVolume2(row.eps);
        b.row({row.eps, static_cast<double>(row.n), row.value, row.scaled, closed});
        lo = std::min(lo, row.scaled);
        hi = std::max(hi, row.scaled);
        sum += row.scaled;
        closedWorst = std::max(closedWorst, std::abs(row.value - closed) / closed);
    }
    const double mean = sum / static_cast<double>(rows.size());
    b.atMost("scaled_spread", "currents: eps * [v_eps](1 d id) stays constant", (hi - lo) / mean, 0.10);
    b.atMost("closed_form_rel_dev", "currents: quadrature matches the closed form", closedWorst, 0.02);
}

// --- f-t ---------------------------------------------------------------------

void runFt(const Scenario& s, Report& r) {
    Builder b{r};
    const auto intervals = count(s.params, "intervals");
    const auto grid = intervalGrid(0.0, 1.0, intervals);
    const double mesh = 1.0 / static_cast<double>(intervals);
    const auto ts = numbers(s.params, "t");
    const auto table = convergenceDiagnostic([&](double t) { return families::fTMap(t, grid); },
                                             families::fTMap(0.0, grid), ts, SamplePlan::allPairs(grid.size()));
    for (const auto& row : table.rows) {
        b.row({row.t, row.uniformDist, row.mt.supPart, row.mt.lipPart, row.mt.total, row.lipEstimate});
        if (mesh > row.t / 4.0) continue;
        std::ostringstream tag;
        tag << "t=" << row.t;
        b.atMost("uniform_minus_sqrt_t(" + tag.str() + ")", "lip-topology: sup |f_t - f_0| = sqrt(t)",
                 std::abs(row.uniformDist - std::sqrt(row.t)), 1e-9);
        b.atMost("sup_part_minus_uniform(" + tag.str() + ")", "lip-topology: MT sup part is the uniform distance",
                 std::abs(row.mt.supPart - row.uniformDist), 1e-9);
        b.atLeast("lip_part(" + tag.str() + ")", "lip-topology: MT Lipschitz part at least 1/sqrt(t)",
                  row.mt.lipPart, 1.0 / std::sqrt(row.t));
    }
    b.holds("compact_open_converges", "lip-topology: f_t tends to f_0 uniformly", table.coConvergent);
    b.holds("mt_does_not_converge", "lip-topology: f_t does not tend to f_0 in MT", !table.mtConvergent);
}

// --- mt-metric ---------------------------------------------------------------

void runMt(const Scenario& s, Report& r) {
    Builder b{r};
    Rng rng(s.seed);
    const auto nSamples = count(s.params, "samples");
    const auto samples = intervalGrid(0.0, 1.0, nSamples - 1);
    const auto plan = SamplePlan::allPairs(samples.size());
    const double phiLip = number(s.params, "phi_lip");
    auto R = euclidean(1);
    LipMap phi{R, R, [phiLip](const Point& y) { return Point{phiLip * std::sin(y[0])}; }, {}, "phi"};

    std::vector<LipMap> maps;
    for (std::size_t i = 0; i < count(s.params, "maps"); ++i) {
        const double a = uniform(rng, -1, 1), w = uniform(rng, 0, 4), c = uniform(rng, 0, 2 * std::numbers::pi),
                     d = uniform(rng, -1, 1);
        maps.push_back({R, R, [=](const Point& x) { return Point{a * std::sin(w * x[0] + c) + d * x[0]}; }, samples,
                        "f" + std::to_string(i)});
    }
    const std::size_t n = maps.size();
    std::vector<double> lips;
    for (const auto& f : maps) lips.push_back(lipEstimate(f, plan));
    std::vector<std::vector<double>> D(n, std::vector<double>(n, 0.0));
    double asym = 0.0, supDev = 0.0, lipSlack = std::numeric_limits<double>::infinity(), postExcess = -1.0,
           btSlack = std::numeric_limits<double>::infinity();
    double ratioLo = std::numeric_limits<double>::infinity(), ratioHi = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const auto mt = mtDistance(maps[i], maps[j], plan);
            D[i][j] = mt.total;
            if (j < i) {
                asym = std::max(asym, std::abs(D[i][j] - D[j][i]));
                continue;
            }
            const double unif = uniformDistance(maps[i], maps[j]);
            supDev = std::max(supDev, std::abs(mt.supPart - unif));
            lipSlack = std::min(lipSlack, mt.lipPart - std::abs(lips[i] - lips[j]));
            const auto post = mtDistance(compose(phi, maps[i]), compose(phi, maps[j]), plan);
            postExcess = std::max(postExcess, post.total - phiLip * mt.total);
            const auto bt = btDistance(maps[i], maps[j], plan);
            btSlack = std::min(btSlack, mt.lipPart - bt.lipPart);
            const double ratio = bt.total > 0 ? mt.total / bt.total : 1.0;
            ratioLo = std::min(ratioLo, ratio);
            ratioHi = std::max(ratioHi, ratio);
            b.row({static_cast<double>(i), static_cast<double>(j), mt.total, mt.supPart, mt.lipPart, bt.total, unif,
                   post.total, ratio});
        }
    double triangle = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t l = 0; l < n; ++l) triangle = std::max(triangle, D[i][j] - D[i][l] - D[l][j]);
    r.notes["mt_over_bt_range"] = {ratioLo, ratioHi};
    b.atMost("symmetry", "lip-topology: MT distance is symmetric", asym, 0.0);
    b.atMost("triangle_excess", "lip-topology: MT distance satisfies the triangle inequality", triangle, 2e-9);
    b.atMost("sup_part_minus_uniform", "lip-topology: MT sup part is the sampled uniform distance", supDev, 1e-9);
    b.atLeast("lip_part_minus_lip_difference", "lip-topology: MT Lipschitz part bounds |Lip f - Lip g|", lipSlack,
              -1e-12);
    b.atMost("post_composition_excess", "lip-topology: post-composition is Lip(phi)-Lipschitz in MT", postExcess,
             1e-8);
    b.atLeast("mt_lip_minus_bt_lip", "lip-topology: on R the MT Lipschitz part dominates the BT one", btSlack, -1e-12);

    // Arens-Eells norm oracles.
    auto X = euclidean(2);
    const auto inst = count(s.params, "oracle_instances");
    double four = 0.0, two = 0.0, incl = 0.0;
    for (std::size_t t = 0; t < inst; ++t) {
        Point p[4];
        for (auto& q : p) q = randomPoint(rng, 2);
        const FreeSpaceElement m{X, SignedMeasure({{p[0], 1.0}, {p[1], -1.0}, {p[2], -1.0}, {p[3], 1.0}}),
                                 std::nullopt};
        four = std::max(four, std::abs(aeNorm(m) - fourPointNorm(*X, p[0], p[1], p[2], p[3])));
        two = std::max(two, std::abs(aeNorm(diracDifference(X, p[0], p[1])) - X->distance(p[0], p[1])));
    }
    for (std::size_t t = 0; t < std::max<std::size_t>(1, inst / 10); ++t) {
        std::vector<Atom> atoms;
        double total = 0.0;
        for (int a = 0; a < 4; ++a) {
            const double w = uniform(rng, -1, 1);
            total += w;
            atoms.push_back({randomPoint(rng, 2), w});
        }
        atoms.push_back({randomPoint(rng, 2), -total});
        const FreeSpaceElement m{X, SignedMeasure(atoms), std::nullopt};
        std::vector<Point> carrier;
        for (int c = 0; c < 6; ++c) carrier.push_back(randomPoint(rng, 2, -2.0, 2.0));
        incl = std::max(incl, std::abs(aeNorm(m) - aeNormOnCarrier(m, carrier)));
    }
    b.atMost("four_point_vs_lp", "free-banach: four-point closed form equals the LP norm", four, 1e-8);
    b.atMost("dirac_difference_vs_distance", "free-banach: Dirac embedding is isometric", two, 1e-8);
    b.atMost("inclusion_isometry", "free-banach: subspace inclusion is isometric", incl, 1e-8);
}

// --- c1-compare --------------------------------------------------------------

bool strictlyDecreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) return false;
    return true;
}

void runC1(const Scenario& s, Report& r) {
    Builder b{r};
    const auto samples = families::circleSamples(count(s.params, "samples"));
    const auto plan = SamplePlan::allPairs(samples.size());
    const auto ts = numbers(s.params, "t");
    const auto limit = families::zeroC1(samples);

    const auto slow = c1Comparison([&](double t) { return families::tSin(t, samples); }, limit, ts, plan);
    std::vector<double> c1s, mts;
    for (const auto& row : slow.rows) {
        b.row({0.0, row.t, row.c1Dist, row.mt.supPart, row.mt.lipPart, row.mt.total, row.ratio});
        c1s.push_back(row.c1Dist);
        mts.push_back(row.mt.total);
    }
    r.notes["t_sin_ratio_range"] = {slow.minRatio, slow.maxRatio};
    b.holds("t_sin_co_monotone", "lip-topology: MT and C1 distances decay together",
            strictlyDecreasing(c1s) && strictlyDecreasing(mts) && slow.c1Trend == Trend::Converging &&
                slow.mtTrend == Trend::Converging);
    b.atMost("t_sin_ratio_spread", "lip-topology: MT / C1 ratio stays bounded", slow.maxRatio / slow.minRatio, 2.0);

    const auto fast = c1Comparison([&](double t) { return families::tSinOverT(t, samples); }, limit, ts, plan);
    double minC1 = std::numeric_limits<double>::infinity(), minMt = minC1;
    for (const auto& row : fast.rows) {
        b.row({1.0, row.t, row.c1Dist, row.mt.supPart, row.mt.lipPart, row.mt.total, row.ratio});
        minC1 = std::min(minC1, row.c1Dist);
        minMt = std::min(minMt, row.mt.total);
    }
    b.atLeast("t_sin_over_t_min_c1", "lip-topology: t sin(x/t) stays C1-separated from 0", minC1, 0.5);
    b.atLeast("t_sin_over_t_min_mt", "lip-topology: t sin(x/t) stays MT-separated from 0", minMt, 0.5);
}

// --- mv-cosheaf --------------------------------------------------------------

Point pointIn(Rng& rng, const std::vector<const OpenRegion*>& all, const Point& lo, const Point& hi) {
    for (;;) {
        Point p(lo.size());
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = uniform(rng, lo[i], hi[i]);
        if (std::all_of(all.begin(), all.end(), [&](const OpenRegion* U) { return U->contains(p); })) return p;
    }
}

void runMv(const Scenario& s, Report& r) {
    Builder b{r};
    Rng rng(s.seed);
    auto X = euclidean(2);
    const Point uc = s.params.at("u_center").get<std::vector<double>>();
    const Point vc = s.params.at("v_center").get<std::vector<double>>();
    if (uc.size() != 2 || vc.size() != 2) throw Error(ErrorCode::SchemaViolation, "centers must be planar");
    const double ur = number(s.params, "u_radius"), vr = number(s.params, "v_radius");
    const OpenRegion U = OpenRegion::ball(X, uc, ur), V = OpenRegion::ball(X, vc, vr);
    const Point lo{std::min(uc[0] - ur, vc[0] - vr), std::min(uc[1] - ur, vc[1] - vr)};
    const Point hi{std::max(uc[0] + ur, vc[0] + vr), std::max(uc[1] + ur, vc[1] + vr)};
    const OpenRegion both("U cup V", [&](const Point& x) { return std::max(U.rho(x), V.rho(x)); });

    const auto atoms = count(s.params, "atoms");
    std::size_t sumFailures = 0, supportFailures = 0, kernelFailures = 0;
    double tvWorst = 0.0;
    for (std::size_t t = 0; t < count(s.params, "instances"); ++t) {
        std::vector<Atom> xs;
        for (std::size_t a = 0; a < atoms; ++a) xs.push_back({pointIn(rng, {&both}, lo, hi), uniform(rng, -1, 1)});
        const SignedMeasure xi(xs);
        const MvSplit split = mvDecompose(xi, U, V);
        if (!(phi0(split.mu, split.nu) == xi)) ++sumFailures;
        for (const auto& a : split.mu.atoms()) supportFailures += U.contains(a.point) ? 0 : 1;
        for (const auto& a : split.nu.atoms()) supportFailures += V.contains(a.point) ? 0 : 1;
        const double tv = xi.totalVariation();
        tvWorst = std::max(tvWorst, std::abs(split.mu.totalVariation() + split.nu.totalVariation() - tv) / tv);

        std::vector<Atom> ks;
        for (std::size_t a = 0; a < atoms / 5 + 1; ++a) ks.push_back({pointIn(rng, {&U, &V}, lo, hi), uniform(rng, -1, 1)});
        const SignedMeasure gen(ks);
        const SignedMeasure w = mvKernelWitness(gen, -gen, U, V);
        if (!(w == gen)) ++kernelFailures;
        b.row({static_cast<double>(t), static_cast<double>(xi.size()), tv, split.mu.totalVariation(),
               split.nu.totalVariation(), split.epsilon, static_cast<double>(w.size())});
    }
    b.atMost("phi0_recovers_xi_failures", "cosheaf: mvDecompose then phi0 recovers xi exactly",
             static_cast<double>(sumFailures), 0.0);
    b.atMost("support_failures", "cosheaf: decomposition respects the cover", static_cast<double>(supportFailures),
             0.0);
    b.atMost("total_variation_rel_dev", "cosheaf: atomwise split preserves |weights|", tvWorst, 1e-12);
    b.atMost("kernel_witness_failures", "cosheaf: exactness in the middle", static_cast<double>(kernelFailures), 0.0);

    // Nested shrinking and the half-plane separation.
    std::size_t nestFailures = 0, separateFailures = 0;
    const OpenRegion left = OpenRegion::halfPlane({-1.0, 0.0}, -0.2);  // x < 0.2
    const OpenRegion right = OpenRegion::halfPlane({1.0, 0.0}, -0.2);  // x > -0.2
    for (std::size_t t = 0; t < 20; ++t) {
        std::vector<Point> K;
        for (int i = 0; i < 20; ++i) K.push_back(pointIn(rng, {&U}, lo, hi));
        const auto s1 = shrinkOpen(K, U);
        const auto s2 = shrinkOpen(K, s1.region);
        for (const auto& k : K) nestFailures += s2.region.contains(k) ? 0 : 1;
        for (int i = 0; i < 200; ++i) {
            const Point p = randomPoint(rng, 2, -2.5, 2.5);
            if (s2.region.contains(p) && !s1.region.contains(p)) ++nestFailures;
            if (s1.region.contains(p) && !U.contains(p)) ++nestFailures;
        }
        std::vector<Point> S;
        for (int i = 0; i < 30; ++i) S.push_back(randomPoint(rng, 2));
        const auto w = separateCover(S, left, right);
        for (const auto& p : S)
            if (!w.region.contains(p) && !left.contains(p)) ++separateFailures;
        for (int i = 0; i < 200; ++i) {
            const Point p = randomPoint(rng, 2, -2.0, 2.0);
            if (w.region.contains(p) && right.rho(p) < w.epsilon) ++separateFailures;
        }
    }
    b.atMost("shrink_nesting_failures", "cosheaf: shrinkOpen twice nests", static_cast<double>(nestFailures), 0.0);
    b.atMost("separate_cover_failures", "cosheaf: separateCover postconditions",
             static_cast<double>(separateFailures), 0.0);
}

// --- homology ----------------------------------------------------------------

FiniteComplex complexFromJson(const Json& j) {
    const auto dims = j.at("dims").get<std::vector<std::size_t>>();
    std::vector<Eigen::MatrixXd> ds;
    for (const auto& m : j.at("boundaries")) {
        const auto rows = m.get<std::vector<std::vector<double>>>();
        const auto nr = static_cast<Eigen::Index>(rows.size());
        const auto nc = static_cast<Eigen::Index>(rows.empty() ? 0 : rows.front().size());
        Eigen::MatrixXd d(nr, nc);
        for (Eigen::Index i = 0; i < nr; ++i) {
            if (static_cast<Eigen::Index>(rows[i].size()) != nc)
                throw Error(ErrorCode::SchemaViolation, "ragged boundary matrix");
            for (Eigen::Index c = 0; c < nc; ++c) d(i, c) = rows[i][c];
        }
        ds.push_back(std::move(d));
    }
    return FiniteComplex(dims, std::move(ds));
}

FiniteComplex changeBasis(const FiniteComplex& c, Rng& rng) {
    std::vector<Eigen::MatrixXd> A;
    for (auto n : c.dims()) {
        const auto N = static_cast<Eigen::Index>(n);
        Eigen::MatrixXd a = Eigen::MatrixXd::Identity(N, N) * 2.0;
        for (Eigen::Index i = 0; i < N; ++i)
            for (Eigen::Index j = 0; j < N; ++j) a(i, j) += uniform(rng, -0.5, 0.5);
        A.push_back(std::move(a));
    }
    std::vector<Eigen::MatrixXd> ds;
    for (std::size_t m = 1; m <= c.topDegree(); ++m)
        ds.push_back(A[m - 1] * c.boundary(m) * A[m].inverse());
    return FiniteComplex(c.dims(), std::move(ds));
}

void addHomologyRows(Builder& b, double id, const FiniteComplex& c, const HomologyResult& h) {
    for (std::size_t m = 0; m < h.betti.size(); ++m) {
        const RankInfo ri = m >= 1 ? h.ranks[m - 1] : (h.reduced ? h.ranks.back() : RankInfo{});
        b.row({id, static_cast<double>(m), static_cast<double>(h.betti[m]), static_cast<double>(ri.rank),
               ri.smallestKept, ri.largestDropped, static_cast<double>(c.dim(m))});
    }
}

void runHomology(const Scenario& s, Report& r) {
    Builder b{r};
    Rng rng(s.seed);
    const auto n = count(s.params, "n");
    const auto top = count(s.params, "top");
    const FiniteComplex ml = alternatingComplex(n, top);
    const auto hml = homology(ml);
    addHomologyRows(b, 0, ml, hml);
    std::vector<std::size_t> expected(top + 1, 0);
    expected[0] = n;
    b.holds("alternating_betti", "homology: positive-degree Betti numbers vanish", hml.betti == expected);

    const FiniteComplex circle = simplicialCircle();
    const auto hc = homology(circle);
    const auto hcr = homology(circle, true);
    addHomologyRows(b, 1, circle, hc);
    addHomologyRows(b, 2, circle, hcr);
    b.holds("circle_betti", "homology: simplicial circle has Betti (1, 1)",
            hc.betti == std::vector<std::size_t>{1, 1});
    b.holds("circle_reduced_betti", "homology: reduced circle has Betti (0, 1)",
            hcr.betti == std::vector<std::size_t>{0, 1});

    bool invariant = true;
    for (std::size_t t = 0; t < count(s.params, "basis_trials"); ++t) {
        const auto c1 = changeBasis(ml, rng);
        const auto c2 = changeBasis(circle, rng);
        const auto h1 = homology(c1), h2 = homology(c2);
        addHomologyRows(b, static_cast<double>(10 + 2 * t), c1, h1);
        addHomologyRows(b, static_cast<double>(11 + 2 * t), c2, h2);
        invariant = invariant && h1.betti == hml.betti && h2.betti == hc.betti;
    }
    b.holds("basis_change_invariance", "homology: Betti numbers survive a change of basis", invariant);

    std::size_t id = 100;
    for (const auto& j : s.params.at("complexes")) {
        const FiniteComplex c = complexFromJson(j);
        const auto h = homology(c, j.value("reduced", false));
        addHomologyRows(b, static_cast<double>(id), c, h);
        if (j.contains("expected_betti"))
            b.holds("complex_" + std::to_string(id) + "_betti", "homology: Betti numbers of a supplied complex",
                    h.betti == j.at("expected_betti").get<std::vector<std::size_t>>());
        ++id;
    }
}

// --- snowflake ---------------------------------------------------------------

void runSnowflake(const Scenario& s, Report& r) {
    Builder b{r};
    const double alpha = number(s.params, "alpha");
    if (alpha > 1.0) throw Error(ErrorCode::SchemaViolation, "alpha must lie in (0, 1]");
    const auto meshes = numbers(s.params, "meshes");
    const auto rows =
        snowflakeCurveDiagnostic([](const Point& x) { return x; }, snowflake(euclidean(1), alpha), meshes);
    for (const auto& row : rows) {
        const double predicted = std::pow(row.mesh, alpha - 1.0);
        b.row({row.mesh, row.estimate, predicted, row.estimate / predicted});
        std::ostringstream tag;
        tag << "h=" << row.mesh;
        b.atMost("rel_dev(" + tag.str() + ")", "metric-core: snowflake curve estimate scales as h^(alpha-1)",
                 std::abs(row.estimate / predicted - 1.0), 0.05);
    }
    if (rows.size() >= 2 && alpha < 1.0) {
        const double exponent = std::log(rows.back().estimate / rows.front().estimate) /
                                std::log(rows.front().mesh / rows.back().mesh);
        b.atMost("exponent_rel_dev", "metric-core: snowflake curve estimate scales as h^(alpha-1)",
                 std::abs(exponent / (1.0 - alpha) - 1.0), 0.05);
    }
}

// --- registry ----------------------------------------------------------------

using Runner = void (*)(const Scenario&, Report&);

struct Entry {
    SuiteInfo info;
    Runner run;
};

Json example(const std::string& suite, Json params, Grid grid, std::uint64_t seed) {
    return {{"schema_version", kSchemaVersion},
            {"suite", suite},
            {"params", std::move(params)},
            {"grid", {{"n", grid.n}, {"refine", grid.refine}}},
            {"seed", seed}};
}

std::vector<Entry> buildRegistry() {
    std::vector<Entry> e;
    auto add = [&](std::string name, std::string exercises, std::vector<ParamSpec> params,
                   std::vector<std::string> columns, Grid grid, Runner run) {
        Json p = Json::object();
        for (const auto& ps : params) p[ps.name] = ps.defaultValue;
        SuiteInfo info{name, std::move(exercises), std::move(params), std::move(columns), grid,
                       example(name, p, grid, 1)};
        e.push_back({std::move(info), run});
    };
    const auto pos = std::optional<double>(0.0);
    add("homotopy-identity",
        "prism operator P on Delta^k x I: boundary(P sigma) + P(boundary sigma) against the end inclusions, "
        "formally and numerically",
        {{"degrees", "number_list", {0, 1, 2, 3}, "simplex degrees k", std::nullopt},
         {"forms", "integer", 3, "random forms per degree", pos}},
        {"k", "trial", "smooth", "lhs", "rhs", "gap", "tolerance"}, Grid{12, true}, runHomotopy);
    add("boundary-identity",
        "boundary of the current T^mu against T of the boundary chain; boundary of boundary vanishes",
        {{"affine_degrees", "number_list", {1, 2, 3}, "degrees of affine chains", std::nullopt},
         {"forms", "integer", 5, "random forms per case", pos},
         {"smooth_eps", "number", 0.1, "eps of the smooth u_eps atom", pos},
         {"smooth_grids", "number_list", {8, 32, 128}, "refinement sequence for the smooth atom", std::nullopt},
         {"dd_degrees", "number_list", {2, 3}, "chain degrees for boundary of boundary", std::nullopt}},
        {"kind", "k", "n", "lhs", "rhs", "gap"}, Grid{32, false}, runBoundary);
    add("u-eps", "oscillating simplices u_eps: current tends to the volume while the uniform limit is 0",
        {{"eps", "number_list", {0.05, 0.02, 0.01}, "eps values", std::nullopt},
         {"k", "integer", 2, "simplex degree (at least 2)", std::optional<double>(1.0)},
         {"quad_grid_factor", "number", 4.0, "quadrature grid n = max(64, factor/eps)", pos},
         {"lip_grid_factor", "number", 3.0, "Lipschitz sampling grid n = factor/eps", pos}},
        {"eps", "n", "value", "closed_form", "lip_estimate", "sqrt_2_over_eps", "uniform_dist"}, Grid{64, false},
        runUEps);
    add("v-eps", "simplices v_eps whose current grows like 1/eps",
        {{"eps", "number_list", {0.1, 0.05, 0.025}, "eps values", std::nullopt}},
        {"eps", "n", "value", "scaled", "closed_form"}, Grid{64, false}, runVEps);
    add("f-t", "ramp family f_t: uniform convergence without MT convergence",
        {{"t", "number_list", {0.5, 0.25, 0.125, 0.0625}, "ramp parameters", std::nullopt},
         {"intervals", "integer", 64, "sample grid j/intervals on [0, 1]", pos}},
        {"t", "uniform_dist", "mt_sup", "mt_lip", "mt_total", "lip_estimate"}, Grid{64, false}, runFt);
    add("mt-metric", "MT distance axioms, post-composition, and Arens-Eells norm oracles",
        {{"maps", "integer", 8, "random maps on [0, 1]", pos},
         {"samples", "integer", 12, "sample points per map", std::optional<double>(1.0)},
         {"phi_lip", "number", 2.0, "Lipschitz constant of phi = L sin", pos},
         {"oracle_instances", "integer", 1000, "random four-point and two-point instances", pos}},
        {"i", "j", "mt_total", "mt_sup", "mt_lip", "bt_total", "uniform", "post_mt_total", "mt_over_bt"},
        Grid{64, false}, runMt);
    add("c1-compare", "MT distance against the C1 distance on the circle",
        {{"t", "number_list", {0.5, 0.25, 0.125, 0.0625}, "parameters (1/t integral)", std::nullopt},
         {"samples", "integer", 400, "equally spaced circle samples", std::optional<double>(1.0)}},
        {"family", "t", "c1_dist", "mt_sup", "mt_lip", "mt_total", "ratio"}, Grid{64, false}, runC1);
    add("mv-cosheaf", "Mayer-Vietoris decomposition of finitely supported measures over two balls",
        {{"instances", "integer", 1000, "random measures", pos},
         {"atoms", "integer", 50, "atoms per measure", pos},
         {"u_center", "number_list", {0.0, 0.0}, "center of U", std::nullopt},
         {"u_radius", "number", 1.0, "radius of U", pos},
         {"v_center", "number_list", {1.2, 0.0}, "center of V", std::nullopt},
         {"v_radius", "number", 1.0, "radius of V", pos}},
        {"instance", "atoms", "tv_xi", "tv_mu", "tv_nu", "epsilon", "kernel_atoms"}, Grid{64, false}, runMv);
    add("homology", "Betti numbers of finite chain complexes by numerical rank",
        {{"n", "integer", 4, "dimension of every chain space", pos},
         {"top", "integer", 6, "top degree (even)", pos},
         {"basis_trials", "integer", 5, "random changes of basis", std::nullopt},
         {"complexes", "object_list", Json::array(), "extra complexes {dims, boundaries, reduced, expected_betti}",
          std::nullopt}},
        {"complex", "degree", "betti", "boundary_rank", "smallest_kept", "largest_dropped", "dim"}, Grid{64, false},
        runHomology);
    add("snowflake", "Lipschitz estimates of t -> t in (R, |.|^alpha) on finer meshes",
        {{"meshes", "number_list", {1e-2, 1e-4}, "strictly decreasing meshes", std::nullopt},
         {"alpha", "number", 0.5, "snowflake exponent in (0, 1]", pos}},
        {"mesh", "estimate", "predicted", "ratio"}, Grid{64, false}, runSnowflake);
    return e;
}

const std::vector<Entry>& registry() {
    static const std::vector<Entry> r = buildRegistry();
    return r;
}

const Entry& findEntry(const std::string& name) {
    for (const auto& e : registry())
        if (e.info.name == name) return e;
    throw Error(ErrorCode::UnknownSuite, "no suite named '" + name + "'");
}

bool typeMatches(const ParamSpec& p, const Json& v) {
    if (p.type == "number") return v.is_number();
    if (p.type == "integer") return v.is_number_integer() || (v.is_number() && std::floor(v.get<double>()) == v.get<double>());
    if (p.type == "boolean") return v.is_boolean();
    if (p.type == "number_list")
        return v.is_array() && !v.empty() && std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_number(); });
    if (p.type == "object_list")
        return v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_object(); });
    return false;
}

void checkMinimum(const ParamSpec& p, const Json& v) {
    if (!p.exclusiveMinimum) return;
    auto bad = [&](double x) { return !(x > *p.exclusiveMinimum); };
    if (v.is_number() && bad(v.get<double>()))
        throw Error(ErrorCode::SchemaViolation, "parameter '" + p.name + "' out of range");
    if (v.is_array())
        for (const auto& x : v)
            if (x.is_number() && bad(x.get<double>()))
                throw Error(ErrorCode::SchemaViolation, "parameter '" + p.name + "' out of range");
}

std::string csvNumber(double x) {
    std::ostringstream o;
    o << std::setprecision(17) << x;
    return o.str();
}

}  // namespace

Json SuiteInfo::schema() const {
    Json props = Json::object();
    for (const auto& p : params) {
        Json e{{"type", p.type}, {"default", p.defaultValue}, {"description", p.description}};
        if (p.exclusiveMinimum) e["exclusive_minimum"] = *p.exclusiveMinimum;
        props[p.name] = std::move(e);
    }
    return {{"type", "object"}, {"properties", std::move(props)}, {"additional_properties", false}};
}

const std::vector<SuiteInfo>& listSuites() {
    static const std::vector<SuiteInfo> infos = [] {
        std::vector<SuiteInfo> v;
        for (const auto& e : registry()) v.push_back(e.info);
        return v;
    }();
    return infos;
}

const SuiteInfo& findSuite(const std::string& name) { return findEntry(name).info; }

Json catalogJson() {
    Json out = Json::array();
    for (const auto& s : listSuites())
        out.push_back({{"name", s.name},
                       {"exercises", s.exercises},
                       {"params", s.schema()},
                       {"csv_columns", s.columns},
                       {"default_grid", {{"n", s.defaultGrid.n}, {"refine", s.defaultGrid.refine}}},
                       {"example", s.example}});
    return {{"schema_version", kSchemaVersion}, {"suites", std::move(out)}};
}

Json Scenario::toJson() const {
    Json j{{"schema_version", kSchemaVersion},
           {"suite", suite},
           {"params", params},
           {"grid", {{"n", grid.n}, {"refine", grid.refine}}},
           {"seed", seed}};
    if (!output.empty()) j["output"] = output;
    return j;
}

Scenario parseScenario(const Json& doc) {
    if (!doc.is_object()) throw Error(ErrorCode::SchemaViolation, "scenario must be a JSON object");
    for (const auto& [key, _] : doc.items())
        if (key != "schema_version" && key != "suite" && key != "params" && key != "grid" && key != "seed" &&
            key != "output")
            throw Error(ErrorCode::SchemaViolation, "unknown scenario field '" + key + "'");
    if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer() ||
        doc["schema_version"].get<int>() != kSchemaVersion)
        throw Error(ErrorCode::SchemaViolation, "schema_version must be " + std::to_string(kSchemaVersion));
    if (!doc.contains("suite") || !doc["suite"].is_string())
        throw Error(ErrorCode::SchemaViolation, "missing suite name");
    Scenario s;
    s.suite = doc["suite"].get<std::string>();
    const SuiteInfo& info = findSuite(s.suite);

    const Json given = doc.value("params", Json::object());
    if (!given.is_object()) throw Error(ErrorCode::SchemaViolation, "params must be an object");
    s.params = Json::object();
    for (const auto& [key, value] : given.items()) {
        const auto it = std::find_if(info.params.begin(), info.params.end(),
                                     [&](const ParamSpec& p) { return p.name == key; });
        if (it == info.params.end())
            throw Error(ErrorCode::SchemaViolation, "suite " + s.suite + " has no parameter '" + key + "'");
        if (!typeMatches(*it, value))
            throw Error(ErrorCode::SchemaViolation, "parameter '" + key + "' must be " + it->type);
        checkMinimum(*it, value);
    }
    for (const auto& p : info.params) s.params[p.name] = given.contains(p.name) ? given[p.name] : p.defaultValue;

    s.grid = info.defaultGrid;
    if (doc.contains("grid")) {
        const Json& g = doc["grid"];
        if (!g.is_object()) throw Error(ErrorCode::SchemaViolation, "grid must be an object");
        for (const auto& [key, value] : g.items()) {
            if (key == "n") {
                if (!value.is_number_integer() || value.get<long long>() < 1)
                    throw Error(ErrorCode::SchemaViolation, "grid.n must be a positive integer");
                s.grid.n = value.get<std::size_t>();
            } else if (key == "refine") {
                if (!value.is_boolean()) throw Error(ErrorCode::SchemaViolation, "grid.refine must be boolean");
                s.grid.refine = value.get<bool>();
            } else {
                throw Error(ErrorCode::SchemaViolation, "unknown grid field '" + key + "'");
            }
        }
    }
    if (doc.contains("seed")) {
        const Json& seed = doc["seed"];
        if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0))
            throw Error(ErrorCode::SchemaViolation, "seed must be a nonnegative integer");
        s.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("output")) {
        if (!doc["output"].is_string()) throw Error(ErrorCode::SchemaViolation, "output must be a path string");
        s.output = doc["output"].get<std::string>();
    }
    return s;
}

Scenario loadScenario(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::SchemaViolation, "cannot read " + file.string());
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::SchemaViolation, std::string("invalid JSON: ") + e.what());
    }
    return parseScenario(doc);
}

bool Report::passed() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

Json Report::toJson() const {
    Json vs = Json::array();
    for (const auto& v : verdicts)
        vs.push_back({{"check", v.check},
                      {"invariant", v.invariant},
                      {"pass", v.pass},
                      {"measured", v.measured},
                      {"tolerance", v.tolerance}});
    return {{"schema_version", kSchemaVersion},
            {"scenario", scenario},
            {"columns", columns},
            {"rows", rows},
            {"verdicts", std::move(vs)},
            {"passed", passed()},
            {"notes", notes},
            {"provenance", {{"git_hash", gitHash}, {"config_hash", configHash}, {"seed", scenario.at("seed")}}}};
}

std::string Report::toCsv() const {
    std::ostringstream o;
    for (std::size_t i = 0; i < columns.size(); ++i) o << (i ? "," : "") << columns[i];
    o << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) o << (i ? "," : "") << csvNumber(row[i]);
        o << '\n';
    }
    return o.str();
}

std::string fnv1aHex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream o;
    o << std::hex << std::setw(16) << std::setfill('0') << h;
    return o.str();
}

Report runScenario(const Scenario& s) {
    const Entry& e = findEntry(s.suite);
    Report r;
    Json echo = s.toJson();
    echo.erase("output");
    r.scenario = echo;
    r.columns = e.info.columns;
    r.gitHash = METCUR_GIT_HASH;
    r.configHash = fnv1aHex(echo.dump());
    e.run(s, r);
    return r;
}

void writeReport(const Report& r, const std::filesystem::path& dir, double elapsedSeconds) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "report.json");
        out << r.toJson().dump(2) << '\n';
    }
    {
        std::ofstream out(dir / "rows.csv");
        out << r.toCsv();
    }
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm utc{};
    gmtime_r(&tt, &utc);
    std::ostringstream stamp;
    stamp << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
    std::ofstream meta(dir / "run_meta.json");
    meta << Json{{"finished_utc", stamp.str()}, {"elapsed_seconds", elapsedSeconds}, {"config_hash", r.configHash}}
                .dump(2)
         << '\n';
}

}  // namespace metcur
