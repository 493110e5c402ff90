#include "metcur/lip_topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "metcur/errors.hpp"
#include "metcur/free_space.hpp"

namespace metcur {

namespace {

void requireShared(const LipMap& f, const LipMap& g) {
    if (f.samples.size() != g.samples.size())
        throw Error(ErrorCode::DimensionMismatch, "maps must share the sample set");
    if (f.samples.empty()) throw Error(ErrorCode::EmptySample, "maps have no samples");
}

std::vector<Point> evaluateAll(const LipMap& f) {
    std::vector<Point> v;
    v.reserve(f.samples.size());
    for (const auto& s : f.samples) v.push_back(f(s));
    return v;
}

}  // namespace

BtDistanceReport btDistance(const LipMap& f, const LipMap& g, const SamplePlan& plan) {
    requireShared(f, g);
    if (!f.target->normed() || !g.target->normed())
        throw Error(ErrorCode::TargetNotNormed, f.target->name() + " has no vector structure");
    const auto fv = evaluateAll(f);
    const auto gv = evaluateAll(g);
    std::vector<Point> diff(fv.size());
    BtDistanceReport r;
    for (std::size_t a = 0; a < fv.size(); ++a) {
        diff[a].resize(fv[a].size());
        for (std::size_t i = 0; i < fv[a].size(); ++i) diff[a][i] = fv[a][i] - gv[a][i];
        r.supPart = std::max(r.supPart, f.target->distance(fv[a], gv[a]));
    }
    const Point zero(f.target->dimension(), 0.0);
    for (const auto& [a, b] : plan.pairs()) {
        const double dx = f.domain->distance(f.samples[a], f.samples[b]);
        if (dx == 0.0) continue;
        // ||h(a) - h(b)|| with h = f - g, measured in the target norm
        Point delta(diff[a].size());
        for (std::size_t i = 0; i < delta.size(); ++i) delta[i] = diff[a][i] - diff[b][i];
        r.lipPart = std::max(r.lipPart, f.target->distance(delta, zero) / dx);
    }
    r.total = r.supPart + r.lipPart;
    return r;
}

MtDistanceReport mtDistance(const LipMap& f, const LipMap& g, const SamplePlan& plan) {
    requireShared(f, g);
    const auto fv = evaluateAll(f);
    const auto gv = evaluateAll(g);
    const MetricSpace& X = *f.target;
    MtDistanceReport r;
    for (std::size_t a = 0; a < fv.size(); ++a) {
        if (fv[a] == gv[a]) continue;
        // ||m|| = ||-m||; solving one orientation keeps the result symmetric bit for bit
        const bool flip = gv[a] < fv[a];
        const double n = aeNorm(diracDifference(f.target, flip ? gv[a] : fv[a], flip ? fv[a] : gv[a]));
        if (n > r.supPart) {
            r.supPart = n;
            r.supSample = a;
        }
    }
    for (std::size_t k = 0; k < plan.pairs().size(); ++k) {
        const auto [a, b] = plan.pairs()[k];
        const double dx = f.domain->distance(f.samples[a], f.samples[b]);
        if (dx == 0.0) continue;
        const double q = fourPointNorm(X, fv[a], gv[a], fv[b], gv[b]) / dx;
        if (q > r.lipPart) {
            r.lipPart = q;
            r.lipPair = k;
        }
    }
    r.total = r.supPart + r.lipPart;
    return r;
}

double uniformDistance(const LipMap& f, const LipMap& g) {
    requireShared(f, g);
    double d = 0.0;
    for (const auto& s : f.samples) d = std::max(d, f.target->distance(f(s), g(s)));
    return d;
}

std::string toString(Trend t) {
    switch (t) {
        case Trend::Converging: return "converging";
        case Trend::Diverging: return "diverging";
        case Trend::Stalled: return "stalled";
    }
    return "?";
}

Trend classifyTrend(std::span<const double> values) {
    if (values.empty()) return Trend::Stalled;
    const double absFloor = 1e-12;
    if (values.size() < 3) {
        return values.back() <= absFloor ? Trend::Converging : Trend::Stalled;
    }
    const double v1 = values[values.size() - 3];
    const double v2 = values[values.size() - 2];
    const double v3 = values[values.size() - 1];
    if (std::max({v1, v2, v3}) <= absFloor) return Trend::Converging;
    if (v1 < v2 && v2 < v3) return Trend::Diverging;
    if (!(v1 >= v2 && v2 >= v3)) return Trend::Stalled;
    const double d1 = v2 - v1;
    const double d2 = v3 - v2;
    double limit = v3;
    if (std::abs(d2 - d1) > 1e-15 * std::max(1.0, v1)) limit = v3 - d2 * d2 / (d2 - d1);
    return std::max(limit, 0.0) <= 0.1 * v1 ? Trend::Converging : Trend::Stalled;
}

ConvergenceTable convergenceDiagnostic(const MapFamily& family, const LipMap& limit,
                                       std::span<const double> params, const SamplePlan& plan) {
    ConvergenceTable table;
    std::vector<double> uniform, mt;
    for (double t : params) {
        const LipMap ft = family(t);
        ConvergenceRow row;
        row.t = t;
        row.uniformDist = uniformDistance(ft, limit);
        row.mt = mtDistance(ft, limit, plan);
        row.lipEstimate = lipEstimate(ft, plan);
        uniform.push_back(row.uniformDist);
        mt.push_back(row.mt.total);
        table.rows.push_back(row);
    }
    table.coConvergent = classifyTrend(uniform) == Trend::Converging;
    table.mtConvergent = classifyTrend(mt) == Trend::Converging;
    return table;
}

C1Table c1Comparison(const C1Family& family, const C1Map& limit, std::span<const double> params,
                     const SamplePlan& plan) {
    C1Table table;
    table.minRatio = std::numeric_limits<double>::infinity();
    table.maxRatio = 0.0;
    std::vector<double> c1, mt;
    for (double t : params) {
        const C1Map ft = family(t);
        C1Row row;
        row.t = t;
        double supValue = 0.0, supDeriv = 0.0;
        for (const auto& s : limit.map.samples) {
            const Point a = ft.map(s), b = limit.map(s);
            const Point da = ft.derivative(s), db = limit.derivative(s);
            double v = 0.0, dv = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) v += (a[i] - b[i]) * (a[i] - b[i]);
            for (std::size_t i = 0; i < da.size(); ++i) dv += (da[i] - db[i]) * (da[i] - db[i]);
            supValue = std::max(supValue, std::sqrt(v));
            supDeriv = std::max(supDeriv, std::sqrt(dv));
        }
        row.c1Dist = supValue + supDeriv;
        row.mt = mtDistance(ft.map, limit.map, plan);
        row.ratio = row.c1Dist > 0.0 ? row.mt.total / row.c1Dist : 0.0;
        if (row.c1Dist > 0.0) {
            table.minRatio = std::min(table.minRatio, row.ratio);
            table.maxRatio = std::max(table.maxRatio, row.ratio);
        }
        c1.push_back(row.c1Dist);
        mt.push_back(row.mt.total);
        table.rows.push_back(row);
    }
    if (!std::isfinite(table.minRatio)) table.minRatio = 0.0;
    table.c1Trend = classifyTrend(c1);
    table.mtTrend = classifyTrend(mt);
    return table;
}

}  // namespace metcur
