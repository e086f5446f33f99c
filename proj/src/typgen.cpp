#include "dimlab/typgen.hpp"

#include <cmath>
#include <sstream>

namespace dimlab {

WeightedPackingMeasure weighted_packing_measure(const DiscreteMeasure& pi,
                                                const Eigen::Ref<const Point>& x, double s,
                                                double q, double t, int base, int j_max) {
    if (!(s > 0.0)) throw std::invalid_argument("weighted_packing_measure: scale must be positive");
    if (base < 2 || j_max < 1)
        throw std::invalid_argument("weighted_packing_measure: base >= 2 and j_max >= 1 required");
    const Region e = ball_region(x, s, pi.frame());
    atoms_in_region(pi, e); // fail fast when B(x,s) misses the support

    const NeighborIndex idx(pi);
    double best_gap = std::numeric_limits<double>::infinity();
    int best_j = 0;
    for (int j = 1; j <= j_max; ++j) {
        const double r = s * std::pow(static_cast<double>(base), -j);
        const PackingResult pack = greedy_packing(pi, e, r, q);
        double total = 0.0;
        Eigen::VectorXd moments(pack.centers.rows());
        for (Eigen::Index i = 0; i < pack.centers.rows(); ++i) {
            moments[i] = std::pow(idx.mass_within(pack.centers.row(i).transpose(), r), q);
            total += moments[i];
        }
        const double target = std::pow(r, -t);
        if (total >= target) {
            WeightedPackingMeasure out;
            out.base_point = x;
            out.scale = s;
            out.q = q;
            out.t = t;
            out.scan_index = j;
            out.radius = r;
            out.moment_sum = total;
            out.packing = pack;
            out.measure = DiscreteMeasure(pack.centers, moments / total, pi.frame());
            return out;
        }
        if (target / total < best_gap) {
            best_gap = target / total;
            best_j = j;
        }
    }
    std::ostringstream msg;
    msg << "weighted_packing_measure: no radius s*" << base << "^-j with j <= " << j_max
        << " reaches the density target r^-" << t << " (closest at j = " << best_j
        << ", short by factor " << best_gap << ")";
    throw ScanExhaustedError(msg.str());
}

DiscreteMeasure mix(const std::vector<std::pair<double, DiscreteMeasure>>& components) {
    if (components.empty()) throw std::invalid_argument("mix: needs at least one component");
    const int d = components.front().second.ambient_dim();
    double csum = 0.0;
    Eigen::Index rows = 0;
    for (const auto& [p, m] : components) {
        if (!(p > 0.0)) throw std::invalid_argument("mix: coefficients must be positive");
        if (m.ambient_dim() != d) throw std::invalid_argument("mix: ambient dimensions differ");
        csum += p;
        rows += m.size();
    }
    if (std::abs(csum - 1.0) > 1e-9)
        throw std::invalid_argument("mix: coefficients must sum to 1");

    Eigen::MatrixXd atoms(rows, d);
    Eigen::VectorXd weights(rows);
    Box frame = components.front().second.frame();
    Eigen::Index at = 0;
    for (const auto& [p, m] : components) {
        atoms.middleRows(at, m.size()) = m.atoms();
        weights.segment(at, m.size()) = p * m.weights();
        frame.lo = frame.lo.cwiseMin(m.frame().lo);
        frame.hi = frame.hi.cwiseMax(m.frame().hi);
        at += m.size();
    }
    return DiscreteMeasure(std::move(atoms), std::move(weights), std::move(frame));
}

DiscreteMeasure finite_net_measure(const Eigen::MatrixXd& points, Eigen::Index n,
                                   std::optional<Eigen::VectorXd> weights) {
    if (n < 1 || n > points.rows())
        throw std::invalid_argument("finite_net_measure: n must lie in [1, rows]");
    Eigen::MatrixXd atoms = points.topRows(n);
    Eigen::VectorXd w;
    if (weights) {
        if (weights->size() != n)
            throw std::invalid_argument("finite_net_measure: weight count must equal n");
        const double total = weights->sum();
        if (std::abs(total - 1.0) > 1e-6)
            throw std::invalid_argument("finite_net_measure: weights must sum to 1 within 1e-6");
        w = *weights / total;
    } else {
        w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    }
    return DiscreteMeasure(std::move(atoms), std::move(w));
}

DiscreteMeasure localized_mixture(const DiscreteMeasure& inner, const DiscreteMeasure& outer,
                                  const Eigen::Ref<const Point>& z, double kappa, double lambda,
                                  double margin) {
    if (!(kappa > 0.0)) throw std::invalid_argument("localized_mixture: kappa must be positive");
    if (!(lambda > 0.0 && lambda < 1.0))
        throw std::invalid_argument("localized_mixture: lambda must lie in (0,1)");
    if (!(margin > 0.0)) throw std::invalid_argument("localized_mixture: margin must be positive");
    for (Eigen::Index i = 0; i < inner.size(); ++i)
        if ((inner.atoms().row(i).transpose() - z).norm() > kappa)
            throw std::invalid_argument("localized_mixture: inner atom escapes B(z, kappa)");
    const double keepout = kappa + 2.0 * margin;
    for (Eigen::Index i = 0; i < outer.size(); ++i)
        if ((outer.atoms().row(i).transpose() - z).norm() < keepout)
            throw std::invalid_argument("localized_mixture: outer atom inside the keep-out ring");
    return mix({{lambda, inner}, {1.0 - lambda, outer}});
}

} // namespace dimlab
