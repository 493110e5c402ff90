#include "metcur/free_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "metcur/errors.hpp"
#include "metcur/lp.hpp"

namespace metcur {

namespace {

bool pointLess(const Atom& a, const Atom& b) { return a.point < b.point; }

}  // namespace

SignedMeasure::SignedMeasure(std::vector<Atom> atoms) {
    std::stable_sort(atoms.begin(), atoms.end(), pointLess);
    for (auto& a : atoms) {
        if (!atoms_.empty() && atoms_.back().point == a.point)
            atoms_.back().weight += a.weight;
        else
            atoms_.push_back(std::move(a));
    }
    std::erase_if(atoms_, [](const Atom& a) { return std::abs(a.weight) < zeroWeight; });
}

SignedMeasure SignedMeasure::dirac(const Point& p, double weight) { return SignedMeasure({{p, weight}}); }

double SignedMeasure::totalMass() const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.weight;
    return s;
}

double SignedMeasure::totalVariation() const {
    double s = 0.0;
    for (const auto& a : atoms_) s += std::abs(a.weight);
    return s;
}

double SignedMeasure::weightAt(const Point& p) const {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), Atom{p, 0.0}, pointLess);
    return (it != atoms_.end() && it->point == p) ? it->weight : 0.0;
}

SignedMeasure SignedMeasure::restrictTo(const std::function<bool(const Point&)>& inside) const {
    SignedMeasure r;
    for (const auto& a : atoms_)
        if (inside(a.point)) r.atoms_.push_back(a);
    return r;
}

SignedMeasure SignedMeasure::operator-() const { return -1.0 * (*this); }

SignedMeasure operator+(const SignedMeasure& a, const SignedMeasure& b) {
    std::vector<Atom> all = a.atoms_;
    all.insert(all.end(), b.atoms_.begin(), b.atoms_.end());
    return SignedMeasure(std::move(all));
}

SignedMeasure operator-(const SignedMeasure& a, const SignedMeasure& b) { return a + (-b); }

SignedMeasure operator*(double s, const SignedMeasure& m) {
    std::vector<Atom> all = m.atoms_;
    for (auto& a : all) a.weight *= s;
    return SignedMeasure(std::move(all));
}

bool operator==(const SignedMeasure& a, const SignedMeasure& b) {
    if (a.atoms_.size() != b.atoms_.size()) return false;
    for (std::size_t i = 0; i < a.atoms_.size(); ++i)
        if (a.atoms_[i].point != b.atoms_[i].point || a.atoms_[i].weight != b.atoms_[i].weight) return false;
    return true;
}

bool FreeSpaceElement::balanced(double tolerance) const {
    return std::abs(measure.totalMass()) <= tolerance * std::max(1.0, measure.totalVariation());
}

FreeSpaceElement diracDifference(SpacePtr space, const Point& x, const Point& y) {
    return {std::move(space), SignedMeasure({{x, 1.0}, {y, -1.0}}), std::nullopt};
}

namespace {

struct LpNodes {
    std::vector<Point> nodes;     // nodes[0] is the pinned base
    std::vector<double> weights;  // objective weight per node
};

LpNodes collectNodes(const FreeSpaceElement& m, std::span<const Point> carrier) {
    LpNodes ln;
    Point base;
    if (m.base) {
        base = *m.base;
    } else {
        if (!m.balanced())
            throw std::invalid_argument("an unbalanced free-space element needs a base point");
        if (m.measure.empty()) return ln;
        base = m.measure.atoms().front().point;
    }
    ln.nodes.push_back(base);
    ln.weights.push_back(0.0);  // f(x0) = 0, so its weight never contributes
    for (const auto& a : m.measure.atoms()) {
        if (a.point == base) continue;
        ln.nodes.push_back(a.point);
        ln.weights.push_back(a.weight);
    }
    for (const auto& p : carrier) {
        if (std::find(ln.nodes.begin(), ln.nodes.end(), p) != ln.nodes.end()) continue;
        ln.nodes.push_back(p);
        ln.weights.push_back(0.0);
    }
    return ln;
}

constexpr double kLpTolerance = 1e-9;

}  // namespace

AeSolution aeNormDetailed(const FreeSpaceElement& m, std::span<const Point> carrier) {
    AeSolution out;
    LpNodes ln = collectNodes(m, carrier);
    const std::size_t N = ln.nodes.size();
    if (N <= 1) {
        out.nodes = ln.nodes;
        out.potential.assign(N, 0.0);
        return out;
    }

    // Variables: f_p = u_p - v_p for p = 1..N-1; f_0 = 0.
    const std::size_t free = N - 1;
    std::vector<double> dist(N * N, 0.0);
    double scale = 0.0;
    for (std::size_t p = 0; p < N; ++p)
        for (std::size_t q = p + 1; q < N; ++q) {
            const double d = m.space->distance(ln.nodes[p], ln.nodes[q]);
            dist[p * N + q] = dist[q * N + p] = d;
            scale = std::max(scale, d);
        }

    lp::Problem prob;
    const std::size_t rows = N * (N - 1);
    prob.A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(2 * free));
    prob.b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows));
    prob.c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * free));
    for (std::size_t p = 1; p < N; ++p) {
        prob.c(static_cast<Eigen::Index>(p - 1)) = ln.weights[p];
        prob.c(static_cast<Eigen::Index>(free + p - 1)) = -ln.weights[p];
    }
    Eigen::Index row = 0;
    for (std::size_t p = 0; p < N; ++p)
        for (std::size_t q = 0; q < N; ++q) {
            if (p == q) continue;
            // f_p - f_q <= d(p, q)
            if (p > 0) {
                prob.A(row, static_cast<Eigen::Index>(p - 1)) += 1.0;
                prob.A(row, static_cast<Eigen::Index>(free + p - 1)) -= 1.0;
            }
            if (q > 0) {
                prob.A(row, static_cast<Eigen::Index>(q - 1)) -= 1.0;
                prob.A(row, static_cast<Eigen::Index>(free + q - 1)) += 1.0;
            }
            prob.b(row) = dist[p * N + q];
            ++row;
        }

    const lp::Solution sol = lp::maximize(prob);
    out.nodes = ln.nodes;
    out.potential.assign(N, 0.0);
    for (std::size_t p = 1; p < N; ++p)
        out.potential[p] = sol.x(static_cast<Eigen::Index>(p - 1)) - sol.x(static_cast<Eigen::Index>(free + p - 1));
    out.pivots = sol.pivots;

    // Certify the potential: it must be 1-Lipschitz on the nodes.
    double violation = 0.0;
    for (std::size_t p = 0; p < N; ++p)
        for (std::size_t q = 0; q < N; ++q)
            violation = std::max(violation, out.potential[p] - out.potential[q] - dist[p * N + q]);
    if (violation > kLpTolerance * std::max(1.0, scale))
        throw Error(ErrorCode::LpNumerics, "potential violates the Lipschitz constraint by " + std::to_string(violation));

    double value = 0.0;
    for (std::size_t p = 1; p < N; ++p) value += ln.weights[p] * out.potential[p];
    out.norm = std::max(0.0, value);
    return out;
}

double aeNorm(const FreeSpaceElement& m) { return aeNormDetailed(m).norm; }

double aeNormOnCarrier(const FreeSpaceElement& m, std::span<const Point> carrier) {
    return aeNormDetailed(m, carrier).norm;
}

double transportNorm(const FreeSpaceElement& m) {
    std::vector<Atom> atoms = m.measure.atoms();
    if (!m.balanced()) {
        if (!m.base) throw std::invalid_argument("an unbalanced free-space element needs a base point");
        atoms.push_back({*m.base, -m.measure.totalMass()});
    }
    const SignedMeasure bal(std::move(atoms));
    std::vector<const Atom*> sources, sinks;
    for (const auto& a : bal.atoms()) (a.weight > 0 ? sources : sinks).push_back(&a);
    if (sources.empty() || sinks.empty()) return 0.0;

    // Nodes: 0 super source, 1..S sources, S+1..S+T sinks, S+T+1 super sink.
    const std::size_t S = sources.size();
    const std::size_t T = sinks.size();
    const std::size_t V = S + T + 2;
    const std::size_t src = 0;
    const std::size_t dst = V - 1;
    struct Edge {
        std::size_t to;
        double cap;
        double cost;
        std::size_t rev;
    };
    std::vector<std::vector<Edge>> g(V);
    auto addEdge = [&](std::size_t a, std::size_t b, double cap, double cost) {
        g[a].push_back({b, cap, cost, g[b].size()});
        g[b].push_back({a, 0.0, -cost, g[a].size() - 1});
    };
    const double inf = std::numeric_limits<double>::infinity();
    double supply = 0.0;
    for (std::size_t i = 0; i < S; ++i) {
        addEdge(src, 1 + i, sources[i]->weight, 0.0);
        supply += sources[i]->weight;
    }
    for (std::size_t j = 0; j < T; ++j) addEdge(1 + S + j, dst, -sinks[j]->weight, 0.0);
    for (std::size_t i = 0; i < S; ++i)
        for (std::size_t j = 0; j < T; ++j)
            addEdge(1 + i, 1 + S + j, inf, m.space->distance(sources[i]->point, sinks[j]->point));

    const double eps = 1e-15 * std::max(1.0, supply);
    double remaining = supply;
    double cost = 0.0;
    while (remaining > eps) {
        // Bellman-Ford on the residual graph (reverse edges carry negative cost).
        std::vector<double> d(V, inf);
        std::vector<std::size_t> prevNode(V, V), prevEdge(V, 0);
        d[src] = 0.0;
        for (std::size_t it = 0; it + 1 < V; ++it) {
            bool changed = false;
            for (std::size_t a = 0; a < V; ++a) {
                if (d[a] == inf) continue;
                for (std::size_t e = 0; e < g[a].size(); ++e) {
                    const Edge& ed = g[a][e];
                    if (ed.cap <= eps) continue;
                    if (d[a] + ed.cost < d[ed.to] - 1e-15) {
                        d[ed.to] = d[a] + ed.cost;
                        prevNode[ed.to] = a;
                        prevEdge[ed.to] = e;
                        changed = true;
                    }
                }
            }
            if (!changed) break;
        }
        if (d[dst] == inf) break;
        double push = remaining;
        for (std::size_t v = dst; v != src; v = prevNode[v]) push = std::min(push, g[prevNode[v]][prevEdge[v]].cap);
        for (std::size_t v = dst; v != src; v = prevNode[v]) {
            Edge& ed = g[prevNode[v]][prevEdge[v]];
            ed.cap -= push;
            g[v][ed.rev].cap += push;
        }
        cost += push * d[dst];
        remaining -= push;
    }
    return cost;
}

double fourPointNorm(const MetricSpace& space, const Point& p1, const Point& p2, const Point& p3,
                     const Point& p4) {
    // Sources p1, p4 (weight +1); sinks p2, p3 (weight -1).
    const double straight = space.distance(p1, p2) + space.distance(p4, p3);
    const double crossed = space.distance(p1, p3) + space.distance(p4, p2);
    return std::min(straight, crossed);
}

FreeSpaceElement pushforwardDual(const LipMap& phi, const FreeSpaceElement& m) {
    std::vector<Atom> atoms;
    atoms.reserve(m.measure.size());
    for (const auto& a : m.measure.atoms()) atoms.push_back({phi(a.point), a.weight});
    FreeSpaceElement out{phi.target, SignedMeasure(std::move(atoms)), std::nullopt};
    if (m.base) out.base = phi(*m.base);
    return out;
}

FreeSpaceElement productEmbed(const FreeSpaceElement& mu, const FreeSpaceElement& nu) {
    if (!mu.base || !nu.base) throw std::invalid_argument("product embedding needs both base points");
    auto prod = std::make_shared<ProductSpace>(mu.space, nu.space);
    std::vector<Atom> atoms;
    for (const auto& a : mu.measure.atoms()) atoms.push_back({prod->join(a.point, *nu.base), a.weight});
    for (const auto& b : nu.measure.atoms()) atoms.push_back({prod->join(*mu.base, b.point), b.weight});
    return {prod, SignedMeasure(std::move(atoms)), prod->join(*mu.base, *nu.base)};
}

FreeSpaceElement rebase(const FreeSpaceElement& m, const Point& newBase) {
    if (!m.base) throw std::invalid_argument("rebase needs the current base point");
    std::vector<Atom> atoms = m.measure.atoms();
    atoms.push_back({*m.base, -m.measure.totalMass()});
    return {m.space, SignedMeasure(std::move(atoms)), newBase};
}

bool sameFunctional(const FreeSpaceElement& a, const FreeSpaceElement& b, double tolerance) {
    if (a.base != b.base) return false;
    const SignedMeasure diff = a.measure - b.measure;
    for (const auto& atom : diff.atoms()) {
        if (a.base && atom.point == *a.base) continue;
        if (std::abs(atom.weight) > tolerance) return false;
    }
    return true;
}

void dumpLp(const FreeSpaceElement& m, std::ostream& out) {
    LpNodes ln = collectNodes(m, {});
    const auto saved = out.precision(17);
    out << "maximize";
    for (std::size_t p = 1; p < ln.nodes.size(); ++p) out << ' ' << (ln.weights[p] >= 0 ? '+' : '-') << ' '
                                                        << std::abs(ln.weights[p]) << " f" << p;
    out << '\n';
    out << "fix f0 = 0\n";
    for (std::size_t p = 0; p < ln.nodes.size(); ++p)
        for (std::size_t q = 0; q < ln.nodes.size(); ++q)
            if (p != q) out << "f" << p << " - f" << q << " <= " << m.space->distance(ln.nodes[p], ln.nodes[q]) << '\n';
    out.precision(saved);
}

}  // namespace metcur
