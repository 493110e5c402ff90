#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "metcur/lipmap.hpp"

namespace metcur {

struct BtDistanceReport {
    double supPart = 0.0;  // sampled sup ||f(a) - g(a)||
    double lipPart = 0.0;  // sampled Lip(f - g)
    double total = 0.0;
};

struct MtDistanceReport {
    double supPart = 0.0;  // max_a ||delta_{f(a)} - delta_{g(a)}||
    double lipPart = 0.0;  // max_(a,b) ||(delta_f - delta_g)(a) - (delta_f - delta_g)(b)|| / d(a,b)
    double total = 0.0;
    std::size_t supSample = 0;  // sample realizing supPart
    std::size_t lipPair = 0;    // plan index realizing lipPart
};

/// Distance in the ||.||_inf + Lip(.) norm. Both maps must share the sample
/// set and land in a normed target; throws TargetNotNormed otherwise.
BtDistanceReport btDistance(const LipMap& f, const LipMap& g, const SamplePlan& plan);

/// Distance pulled back through the Dirac embedding into the free-space dual.
/// Every kernel is balanced, so no base point is involved.
MtDistanceReport mtDistance(const LipMap& f, const LipMap& g, const SamplePlan& plan);

/// max_a d(f(a), g(a)).
double uniformDistance(const LipMap& f, const LipMap& g);

enum class Trend { Converging, Diverging, Stalled };
std::string toString(Trend t);

/// Three-point extrapolation on the tail of a sequence ordered towards the
/// limit parameter. A monotone nonincreasing tail whose Aitken-extrapolated
/// limit falls below 10% of the first of the three values counts as
/// converging to zero; an increasing tail diverges.
Trend classifyTrend(std::span<const double> values);

struct ConvergenceRow {
    double t = 0.0;
    double uniformDist = 0.0;
    MtDistanceReport mt;
    double lipEstimate = 0.0;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    bool coConvergent = false;
    bool mtConvergent = false;
};

using MapFamily = std::function<LipMap(double)>;

ConvergenceTable convergenceDiagnostic(const MapFamily& family, const LipMap& limit,
                                       std::span<const double> params, const SamplePlan& plan);

/// A C^1 map on a one-dimensional domain (interval or circle) into R^K with
/// its derivative oracle.
struct C1Map {
    LipMap map;
    PointMap derivative;
};

struct C1Row {
    double t = 0.0;
    double c1Dist = 0.0;  // sup |f_t - f| + sup |f_t' - f'|
    MtDistanceReport mt;
    double ratio = 0.0;   // mt.total / c1Dist (0 when both vanish)
};

struct C1Table {
    std::vector<C1Row> rows;
    double minRatio = 0.0;
    double maxRatio = 0.0;
    Trend c1Trend = Trend::Stalled;
    Trend mtTrend = Trend::Stalled;
};

using C1Family = std::function<C1Map(double)>;

C1Table c1Comparison(const C1Family& family, const C1Map& limit, std::span<const double> params,
                     const SamplePlan& plan);

}  // namespace metcur
