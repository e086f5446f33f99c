#pragma once

#include "dimlab/measure.hpp"

#include <string>
#include <vector>

namespace dimlab {

/// Contracting similarity x -> ratio * rotation * x + translation,
/// with rotation orthogonal and 0 < ratio < 1.
struct Similarity {
    double ratio = 0.5;
    Eigen::MatrixXd rotation;
    Eigen::VectorXd translation;

    Point operator()(const Eigen::Ref<const Point>& x) const {
        return ratio * (rotation * x) + translation;
    }

    Point fixed_point() const;
};

/// Outer after inner.
Similarity compose(const Similarity& outer, const Similarity& inner);

/// Iterated function system with selection probabilities.
struct IFSModel {
    std::vector<Similarity> maps;
    Eigen::VectorXd probs;

    int ambient_dim() const { return static_cast<int>(maps.front().translation.size()); }
    int num_maps() const { return static_cast<int>(maps.size()); }
};

void validate_ifs(const IFSModel& ifs);

/// Letters are 0-based map indices; w = (m1,...,mn) denotes S_m1 o ... o S_mn.
using Word = std::vector<int>;

/// All words of the given length in lexicographic order.
std::vector<Word> words_of_length(int num_maps, int length);

Point apply_word(const IFSModel& ifs, const Word& w, const Eigen::Ref<const Point>& x);

struct CylinderParams {
    double prob = 1.0;
    double ratio = 1.0;
};

CylinderParams cylinder_params(const IFSModel& ifs, const Word& w);

/// Smallest invariant box containing every map's fixed point. At return,
/// each map sends the box into itself bitwise.
Box attractor_box(const IFSModel& ifs);

/// Level-n approximation: one atom S_w(x0) per word of length n, weighted by
/// the word's probability product; x0 is the first map's fixed point.
/// Throws if the atom count would exceed `atom_cap`.
DiscreteMeasure build_measure(const IFSModel& ifs, int depth,
                              std::int64_t atom_cap = 2'000'000);

struct OscViolation {
    int map_a = -1;
    int map_b = -1; // -1 when the violation is containment, not overlap
    std::string what;
};

/// Open-set check for U: every image S_m(U) must stay inside U and the images
/// must be pairwise disjoint. Exact when all rotations are signed permutations
/// (boxes map to boxes); otherwise a conservative bounding-box test.
struct OscReport {
    bool holds = false;
    bool exact = false;
    std::vector<OscViolation> violations;
};

OscReport verify_osc(const IFSModel& ifs, const Box& domain);

struct SExtremes {
    double s_min = 0.0;
    double s_max = 0.0;
};

/// Extremes of log(p_m)/log(ratio_m) over the maps.
SExtremes s_extremes(const IFSModel& ifs);

/// Text format: '#' comments; first line is the ambient dimension d; each
/// following line is one map, either "ratio t1..td prob" (identity rotation)
/// or "ratio R11..Rdd t1..td prob" with the rotation in row-major order.
/// Needs at least two maps; probabilities within 1e-6 of total 1 are
/// renormalized, anything else is rejected.
IFSModel load_ifs(const std::string& path);

} // namespace dimlab
