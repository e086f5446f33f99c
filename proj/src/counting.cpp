#include "dimlab/counting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace dimlab {

namespace {

std::string csv12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// Candidate atoms sorted by first coordinate for window scans.
struct CoordWindow {
    const DiscreteMeasure* m;
    std::vector<int> sorted; // atom ids

    CoordWindow(const DiscreteMeasure& meas, const std::vector<int>& ids) : m(&meas), sorted(ids) {
        std::sort(sorted.begin(), sorted.end(), [&](int a, int b) {
            const double xa = meas.atoms()(a, 0), xb = meas.atoms()(b, 0);
            return xa < xb || (xa == xb && a < b);
        });
    }

    // Visits atom ids with |coord0 - x0| <= r.
    template <typename Fn>
    void visit(double x0, double r, Fn&& fn) const {
        auto cmp = [&](int id, double v) { return m->atoms()(id, 0) < v; };
        auto it = std::lower_bound(sorted.begin(), sorted.end(), x0 - r, cmp);
        for (; it != sorted.end() && m->atoms()(*it, 0) <= x0 + r; ++it) fn(*it);
    }
};

bool moment_tie_less(double mass_a, double mass_b, double q) {
    // For q >= 0 small masses damp the sum least; for q < 0 large ones do.
    return q >= 0.0 ? mass_a < mass_b : mass_a > mass_b;
}

bool packing_first(double mass_a, double mass_b, double q) {
    // Packing approximates a sup: the extremal moment contribution leads.
    return q >= 0.0 ? mass_a > mass_b : mass_a < mass_b;
}

} // namespace

std::vector<int> atoms_in_region(const DiscreteMeasure& m, const Region& e) {
    std::vector<int> idx;
    for (Eigen::Index i = 0; i < m.size(); ++i)
        if (e.contains(m.atoms().row(i).transpose())) idx.push_back(static_cast<int>(i));
    if (idx.empty()) throw std::invalid_argument("region contains no atoms of the measure");
    return idx;
}

PackingResult greedy_packing(const DiscreteMeasure& m, const Region& e, double r, double q,
                             CenterOrder order) {
    if (!(r > 0.0)) throw std::invalid_argument("greedy_packing: radius must be positive");
    const std::vector<int> ids = atoms_in_region(m, e);
    const NeighborIndex gidx(m);

    std::vector<double> mass(ids.size());
    for (size_t i = 0; i < ids.size(); ++i)
        mass[i] = gidx.mass_within(m.atoms().row(ids[i]).transpose(), r);

    std::vector<size_t> pick(ids.size());
    for (size_t i = 0; i < ids.size(); ++i) pick[i] = i;
    std::sort(pick.begin(), pick.end(), [&](size_t a, size_t b) {
        if (order == CenterOrder::ByMoment && mass[a] != mass[b])
            return packing_first(mass[a], mass[b], q);
        if (lex_less(m.atoms().row(ids[a]).transpose(), m.atoms().row(ids[b]).transpose()))
            return true;
        if (lex_less(m.atoms().row(ids[b]).transpose(), m.atoms().row(ids[a]).transpose()))
            return false;
        return ids[a] < ids[b];
    });

    const CoordWindow window(m, ids);
    std::vector<char> accepted(static_cast<size_t>(m.size()), 0);
    PackingResult out;
    out.radius = r;
    const double sep2 = (2.0 * r) * (2.0 * r);
    for (size_t p : pick) {
        const Point x = m.atoms().row(ids[p]).transpose();
        bool ok = true;
        window.visit(x[0], 2.0 * r, [&](int other) {
            if (!ok || !accepted[static_cast<size_t>(other)]) return;
            if ((m.atoms().row(other).transpose() - x).squaredNorm() <= sep2) ok = false;
        });
        if (!ok) continue;
        accepted[static_cast<size_t>(ids[p])] = 1;
        out.atom_indices.push_back(ids[p]);
    }

    out.centers.resize(static_cast<Eigen::Index>(out.atom_indices.size()), m.ambient_dim());
    for (size_t i = 0; i < out.atom_indices.size(); ++i)
        out.centers.row(static_cast<Eigen::Index>(i)) = m.atoms().row(out.atom_indices[i]);

    out.separation_ok = true;
    for (size_t a = 0; a < out.atom_indices.size() && out.separation_ok; ++a)
        for (size_t b = a + 1; b < out.atom_indices.size(); ++b)
            if ((out.centers.row(static_cast<Eigen::Index>(a)) -
                 out.centers.row(static_cast<Eigen::Index>(b)))
                    .squaredNorm() <= sep2) {
                out.separation_ok = false;
                break;
            }
    return out;
}

double packing_sum(const DiscreteMeasure& m, const Region& e, double r, double q, double c,
                   CenterOrder order) {
    if (!(c > 0.0)) throw std::invalid_argument("packing_sum: dilation must be positive");
    const PackingResult pack = greedy_packing(m, e, r, q, order);
    const NeighborIndex gidx(m);
    double s = 0.0;
    for (Eigen::Index i = 0; i < pack.centers.rows(); ++i) {
        const double mass = gidx.mass_within(pack.centers.row(i).transpose(), c * r);
        if (mass <= 0.0 && q < 0.0)
            throw std::domain_error("packing_sum: zero ball mass with negative q");
        s += std::pow(mass, q);
    }
    return s;
}

double covering_sum(const DiscreteMeasure& m, const Region& e, double r, double q,
                    CenterOrder order) {
    if (!(r > 0.0)) throw std::invalid_argument("covering_sum: radius must be positive");
    const std::vector<int> ids = atoms_in_region(m, e);
    const size_t n = ids.size();
    const NeighborIndex gidx(m);

    std::vector<size_t> pos_of(static_cast<size_t>(m.size()), SIZE_MAX);
    for (size_t i = 0; i < n; ++i) pos_of[static_cast<size_t>(ids[i])] = i;

    const CoordWindow window(m, ids);
    std::vector<double> mass(n);
    std::vector<std::vector<int>> members(n); // positions into ids
    for (size_t i = 0; i < n; ++i) {
        const Point x = m.atoms().row(ids[i]).transpose();
        mass[i] = gidx.mass_within(x, r);
        const double rr = r * r;
        window.visit(x[0], r, [&](int other) {
            if ((m.atoms().row(other).transpose() - x).squaredNorm() < rr)
                members[i].push_back(static_cast<int>(pos_of[static_cast<size_t>(other)]));
        });
        std::sort(members[i].begin(), members[i].end());
    }

    std::vector<char> covered(n, 0);
    size_t remaining = n;
    double sum = 0.0;
    while (remaining > 0) {
        size_t best = SIZE_MAX;
        size_t best_cnt = 0;
        for (size_t c2 = 0; c2 < n; ++c2) {
            if (members[c2].size() < best_cnt) continue; // static bound
            size_t cnt = 0;
            for (int p : members[c2])
                if (!covered[static_cast<size_t>(p)]) ++cnt;
            if (cnt == 0) continue;
            bool take = false;
            if (best == SIZE_MAX || cnt > best_cnt) {
                take = true;
            } else if (cnt == best_cnt) {
                if (order == CenterOrder::ByMoment && mass[c2] != mass[best]) {
                    take = moment_tie_less(mass[c2], mass[best], q);
                } else {
                    take = lex_less(m.atoms().row(ids[c2]).transpose(),
                                    m.atoms().row(ids[best]).transpose());
                }
            }
            if (take) {
                best = c2;
                best_cnt = cnt;
            }
        }
        for (int p : members[best])
            if (!covered[static_cast<size_t>(p)]) {
                covered[static_cast<size_t>(p)] = 1;
                --remaining;
            }
        sum += std::pow(mass[best], q);
    }
    return sum;
}

SlopeEstimate slope_bounds(const ScaleSeries& s, int k_lo) {
    std::vector<const ScaleEntry*> kept;
    for (const auto& e : s.entries)
        if (e.k >= k_lo) kept.push_back(&e);
    if (kept.size() < 3)
        throw std::invalid_argument("slope_bounds: needs at least three ladder entries");
    for (const auto* e : kept)
        if (!(e->value > 0.0) || !(e->r > 0.0))
            throw std::invalid_argument("slope_bounds: values and radii must be positive");

    const size_t n = kept.size();
    std::vector<double> x(n), y(n);
    for (size_t i = 0; i < n; ++i) {
        x[i] = -std::log(kept[i]->r);
        y[i] = std::log(kept[i]->value);
    }
    SlopeEstimate est;
    est.k_lo = kept.front()->k;
    est.k_hi = kept.back()->k;
    est.lower = std::numeric_limits<double>::infinity();
    est.upper = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < n; ++i) {
        const double dx = x[i + 1] - x[i];
        if (!(dx > 0.0)) throw std::invalid_argument("slope_bounds: radii must decrease along k");
        const double sl = (y[i + 1] - y[i]) / dx;
        est.lower = std::min(est.lower, sl);
        est.upper = std::max(est.upper, sl);
    }
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    est.ols = sxy / sxx;
    return est;
}

SlopeEstimate mass_scaling_bounds(const ScaleSeries& s, int k_lo) {
    ScaleSeries inv;
    inv.base = s.base;
    inv.entries = s.entries;
    for (auto& e : inv.entries) {
        if (!(e.value > 0.0))
            throw std::invalid_argument("mass_scaling_bounds: masses must be positive");
        e.value = 1.0 / e.value;
    }
    return slope_bounds(inv, k_lo);
}

void write_series_csv(std::ostream& os, const ScaleSeries& s) {
    os << "k,r,value,log_value,minus_log_r\n";
    for (const auto& e : s.entries)
        os << e.k << ',' << csv12(e.r) << ',' << csv12(e.value) << ',' << csv12(std::log(e.value))
           << ',' << csv12(-std::log(e.r)) << "\n";
}

} // namespace dimlab
