#include "dimlab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

namespace dimlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCertTol = 1e-9;

struct Edge {
    int to;
    double cap;
    double cost;
    size_t rev;
};

// Successive shortest paths with Dijkstra over reduced costs. Supplies are
// real-valued; each augmentation zeroes one endpoint exactly, so the loop
// runs at most twice the node count.
class MinCostFlow {
public:
    explicit MinCostFlow(int n) : adj_(static_cast<size_t>(n)), pot_(static_cast<size_t>(n), 0.0) {}

    void add_pair(int u, int v, double cost) {
        add_edge(u, v, kCap, cost);
        add_edge(v, u, kCap, cost);
    }

    // Returns the total cost of routing all excess to the deficits. Supplies
    // below kFlowTol are rounding crumbs, not mass; chasing them can strand a
    // positive leftover with no matching deficit.
    double run(std::vector<double>& excess) {
        const int n = static_cast<int>(adj_.size());
        double total = 0.0;
        for (long rounds = 0;; ++rounds) {
            if (rounds > 200L * (n + 1))
                throw std::logic_error("min cost flow: augmentation budget exhausted");
            int src = -1;
            for (int u = 0; u < n; ++u)
                if (excess[static_cast<size_t>(u)] > kFlowTol) {
                    src = u;
                    break;
                }
            if (src < 0) break;

            dijkstra(src);
            int snk = -1;
            double best = kInf;
            for (int v = 0; v < n; ++v) {
                if (excess[static_cast<size_t>(v)] >= 0.0 || dist_[static_cast<size_t>(v)] == kInf)
                    continue;
                const double true_cost = dist_[static_cast<size_t>(v)] + pot_[static_cast<size_t>(v)];
                if (true_cost < best) {
                    best = true_cost;
                    snk = v;
                }
            }
            if (snk < 0) throw std::logic_error("min cost flow: deficit unreachable");

            for (int v = 0; v < n; ++v)
                if (dist_[static_cast<size_t>(v)] < kInf) pot_[static_cast<size_t>(v)] += dist_[static_cast<size_t>(v)];

            double delta = std::min(excess[static_cast<size_t>(src)], -excess[static_cast<size_t>(snk)]);
            for (int v = snk; v != src;) {
                const auto [u, ei] = prev_[static_cast<size_t>(v)];
                delta = std::min(delta, adj_[static_cast<size_t>(u)][ei].cap);
                v = u;
            }
            for (int v = snk; v != src;) {
                const auto [u, ei] = prev_[static_cast<size_t>(v)];
                Edge& e = adj_[static_cast<size_t>(u)][ei];
                e.cap -= delta;
                adj_[static_cast<size_t>(e.to)][e.rev].cap += delta;
                total += delta * e.cost;
                v = u;
            }
            excess[static_cast<size_t>(src)] -= delta;
            excess[static_cast<size_t>(snk)] += delta;
        }
        return total;
    }

    double potential(int u) const { return pot_[static_cast<size_t>(u)]; }

private:
    static constexpr double kCap = 8.0;      // comfortably above any total flow
    static constexpr double kFlowTol = 1e-12; // supplies below this are FP residue

    void add_edge(int u, int v, double cap, double cost) {
        adj_[static_cast<size_t>(u)].push_back({v, cap, cost, adj_[static_cast<size_t>(v)].size()});
        adj_[static_cast<size_t>(v)].push_back({u, 0.0, -cost, adj_[static_cast<size_t>(u)].size() - 1});
    }

    void dijkstra(int src) {
        const size_t n = adj_.size();
        dist_.assign(n, kInf);
        prev_.assign(n, {-1, 0});
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
        dist_[static_cast<size_t>(src)] = 0.0;
        pq.push({0.0, src});
        while (!pq.empty()) {
            const auto [d, u] = pq.top();
            pq.pop();
            if (d > dist_[static_cast<size_t>(u)]) continue;
            const auto& edges = adj_[static_cast<size_t>(u)];
            for (size_t ei = 0; ei < edges.size(); ++ei) {
                const Edge& e = edges[ei];
                if (e.cap <= 0.0) continue;
                const double rc = std::max(0.0, e.cost + pot_[static_cast<size_t>(u)] -
                                                    pot_[static_cast<size_t>(e.to)]);
                const double nd = d + rc;
                if (nd < dist_[static_cast<size_t>(e.to)]) {
                    dist_[static_cast<size_t>(e.to)] = nd;
                    prev_[static_cast<size_t>(e.to)] = {u, ei};
                    pq.push({nd, e.to});
                }
            }
        }
    }

    std::vector<std::vector<Edge>> adj_;
    std::vector<double> pot_;
    std::vector<double> dist_;
    std::vector<std::pair<int, size_t>> prev_;
};

} // namespace

MetricResult fortet_mourier(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                            Eigen::Index support_cap) {
    if (mu.ambient_dim() != nu.ambient_dim())
        throw std::invalid_argument("fortet_mourier: ambient dimensions differ");
    if (mu.size() > support_cap || nu.size() > support_cap)
        throw SupportCapError("fortet_mourier: support size exceeds cap of " +
                              std::to_string(support_cap));

    // Union support; bitwise-equal atoms share a node.
    std::map<std::vector<double>, int> id_of;
    std::vector<Point> pts;
    std::vector<double> signed_mass;
    auto node = [&](const Point& p) {
        std::vector<double> key(p.data(), p.data() + p.size());
        auto [it, inserted] = id_of.try_emplace(key, static_cast<int>(pts.size()));
        if (inserted) {
            pts.push_back(p);
            signed_mass.push_back(0.0);
        }
        return it->second;
    };
    for (Eigen::Index i = 0; i < mu.size(); ++i) signed_mass[static_cast<size_t>(node(mu.atom(i)))] += mu.weight(i);
    for (Eigen::Index i = 0; i < nu.size(); ++i) signed_mass[static_cast<size_t>(node(nu.atom(i)))] -= nu.weight(i);

    const int n = static_cast<int>(pts.size());
    const int bank = n;
    MinCostFlow flow(n + 1);
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v)
            flow.add_pair(u, v, (pts[static_cast<size_t>(u)] - pts[static_cast<size_t>(v)]).norm());
        flow.add_pair(u, bank, 1.0); // the sup bound |f| <= 1
    }

    std::vector<double> excess = signed_mass;
    double imbalance = 0.0;
    for (double a : signed_mass) imbalance += a;
    excess.push_back(-imbalance);

    MetricResult res;
    res.distance = flow.run(excess);

    res.witness.points.resize(n, mu.ambient_dim());
    res.witness.values.resize(n);
    for (int u = 0; u < n; ++u) {
        res.witness.points.row(u) = pts[static_cast<size_t>(u)].transpose();
        res.witness.values[u] = std::clamp(flow.potential(bank) - flow.potential(u), -1.0, 1.0);
    }

    // Certificate: the witness must be feasible and reproduce the flow cost.
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            const double gap = std::abs(res.witness.values[u] - res.witness.values[v]);
            const double d = (pts[static_cast<size_t>(u)] - pts[static_cast<size_t>(v)]).norm();
            if (gap > d + kCertTol)
                throw std::logic_error("fortet_mourier: witness violates the Lipschitz bound");
        }
    double dual = 0.0;
    for (int u = 0; u < n; ++u) dual += signed_mass[static_cast<size_t>(u)] * res.witness.values[u];
    if (std::abs(dual - res.distance) > kCertTol)
        throw std::logic_error("fortet_mourier: primal-dual certificate failed");
    return res;
}

EnlargementReport enlargement_check(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                    const Region& e, double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw std::invalid_argument("enlargement_check: alpha and beta must be positive");
    EnlargementReport rep;
    rep.distance = fortet_mourier(mu, nu).distance;
    rep.eta = alpha * beta;
    rep.premise = rep.distance < rep.eta;
    rep.lhs = region_mass(mu, e);
    rep.rhs = region_mass(nu, enlarge(e, alpha)) + beta;
    rep.holds = !rep.premise || rep.lhs <= rep.rhs + 1e-12;
    return rep;
}

} // namespace dimlab
