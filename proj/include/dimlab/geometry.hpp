#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace dimlab {

using Point = Eigen::VectorXd;

/// Axis-aligned box. lo <= hi componentwise.
struct Box {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;

    int dim() const { return static_cast<int>(lo.size()); }
    Point center() const { return 0.5 * (lo + hi); }
    Eigen::VectorXd extent() const { return hi - lo; }
    double diameter() const { return (hi - lo).norm(); }

    // Closed-box membership.
    bool contains(const Eigen::Ref<const Point>& x) const {
        return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
    }
};

/// Open Euclidean ball.
struct Ball {
    Point center;
    double radius = 0.0;

    bool contains(const Eigen::Ref<const Point>& x) const {
        return (x - center).squaredNorm() < radius * radius;
    }
};

/// One cell of the base-adic grid over a frame box: axis j spans
/// frame.lo[j] + extent[j] * [index[j], index[j]+1) / base^level.
struct GridCell {
    int base = 2;
    int level = 0;
    std::vector<std::int64_t> index;
};

inline std::int64_t ipow(std::int64_t b, int e) {
    std::int64_t v = 1;
    for (int i = 0; i < e; ++i) v *= b;
    return v;
}

inline Box cell_box(const GridCell& c, const Box& frame) {
    const int d = frame.dim();
    if (static_cast<int>(c.index.size()) != d)
        throw std::invalid_argument("cell_box: index rank does not match frame");
    const double scale = 1.0 / static_cast<double>(ipow(c.base, c.level));
    Box b;
    b.lo.resize(d);
    b.hi.resize(d);
    for (int j = 0; j < d; ++j) {
        const double w = frame.hi[j] - frame.lo[j];
        b.lo[j] = frame.lo[j] + w * (static_cast<double>(c.index[j]) * scale);
        b.hi[j] = frame.lo[j] + w * (static_cast<double>(c.index[j] + 1) * scale);
    }
    return b;
}

inline Point cell_center(const GridCell& c, const Box& frame) {
    return cell_box(c, frame).center();
}

inline double cell_diameter(const GridCell& c, const Box& frame) {
    return cell_box(c, frame).diameter();
}

/// Strict lexicographic order on coordinates; used for deterministic tie-breaks.
inline bool lex_less(const Eigen::Ref<const Point>& a, const Eigen::Ref<const Point>& b) {
    for (Eigen::Index j = 0; j < a.size(); ++j) {
        if (a[j] < b[j]) return true;
        if (a[j] > b[j]) return false;
    }
    return false;
}

} // namespace dimlab
