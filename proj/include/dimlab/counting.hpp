#pragma once

#include "dimlab/measure.hpp"

#include <iosfwd>

namespace dimlab {

/// Candidate ordering for the greedy sweeps. ByMoment biases toward the
/// extremal moment contribution for the given q; Lexicographic ignores q so
/// repeated runs across q share one center set.
enum class CenterOrder { ByMoment, Lexicographic };

/// Centres of a 2r-separated packing, stored as rows; indices refer to atoms
/// of the measure the packing was drawn from.
struct PackingResult {
    std::vector<int> atom_indices;
    Eigen::MatrixXd centers;
    double radius = 0.0;
    bool separation_ok = false;
};

struct ScaleEntry {
    int k = 0;
    double r = 0.0;
    double value = 0.0;
};

/// Values along the geometric scale ladder r_k = base^-k.
struct ScaleSeries {
    int base = 2;
    std::vector<ScaleEntry> entries;
};

/// Slope bracket of log(value) against -log(r) over a ladder window.
/// `lower`/`upper` are the extreme per-step slopes, `ols` the least-squares
/// slope; ols always lies inside [lower, upper].
struct SlopeEstimate {
    double lower = 0.0;
    double upper = 0.0;
    double ols = 0.0;
    int k_lo = 0;
    int k_hi = 0;
};

/// Atom indices lying in the region, ascending. Throws when empty.
std::vector<int> atoms_in_region(const DiscreteMeasure& m, const Region& e);

/// Greedy 2r-separated packing with centers at atoms of e. Candidates are
/// visited in the requested order (ByMoment: extremal ball mass first, ties
/// by coordinate order) and kept when farther than 2r from all kept centers.
PackingResult greedy_packing(const DiscreteMeasure& m, const Region& e, double r, double q,
                             CenterOrder order = CenterOrder::ByMoment);

/// Sum of ball masses at the dilated radius c*r over a greedy packing at
/// separation radius r, each raised to q.
double packing_sum(const DiscreteMeasure& m, const Region& e, double r, double q, double c = 1.0,
                   CenterOrder order = CenterOrder::ByMoment);

/// Greedy cover of the atoms of e by balls of radius r centred at atoms of e:
/// repeatedly take the center covering the most uncovered atoms (ties by
/// extremal ball mass for the given q, then coordinate order) and sum the
/// chosen ball masses raised to q.
double covering_sum(const DiscreteMeasure& m, const Region& e, double r, double q,
                    CenterOrder order = CenterOrder::ByMoment);

/// Slope bracket of the series from ladder index k_lo on. Needs at least
/// three retained entries and positive values.
SlopeEstimate slope_bounds(const ScaleSeries& s, int k_lo);

/// Slope bracket of log(1/value) against -log(r): the scaling exponent of a
/// mass series, positive for masses shrinking with r.
SlopeEstimate mass_scaling_bounds(const ScaleSeries& s, int k_lo);

/// CSV rows "k,r,value,log_value,minus_log_r" with a header line.
void write_series_csv(std::ostream& os, const ScaleSeries& s);

} // namespace dimlab
