#pragma once

#include "dimlab/geometry.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dimlab {

/// Finitely supported probability measure: atoms are rows of an N x d matrix,
/// weights are positive and sum to 1 (within 1e-9). Every measure carries a
/// frame box containing its support; grids and nets are laid out relative to it.
class DiscreteMeasure {
public:
    DiscreteMeasure(Eigen::MatrixXd atoms, Eigen::VectorXd weights);
    DiscreteMeasure(Eigen::MatrixXd atoms, Eigen::VectorXd weights, Box frame);

    Eigen::Index size() const { return atoms_.rows(); }
    int ambient_dim() const { return static_cast<int>(atoms_.cols()); }
    const Eigen::MatrixXd& atoms() const { return atoms_; }
    const Eigen::VectorXd& weights() const { return weights_; }
    Point atom(Eigen::Index i) const { return atoms_.row(i).transpose(); }
    double weight(Eigen::Index i) const { return weights_[i]; }
    const Box& frame() const { return frame_; }

private:
    Eigen::MatrixXd atoms_;
    Eigen::VectorXd weights_;
    Box frame_;
};

/// Union of open balls and grid cells, evaluated against a common frame.
/// Cells are half-open except on the upper face of the frame.
struct Region {
    std::vector<Ball> balls;
    std::vector<GridCell> cells;
    Box frame;

    bool contains(const Eigen::Ref<const Point>& x) const;
};

Region ball_region(Point center, double radius, Box frame);

/// Pushforward of a measure onto an adic grid: only occupied cells are stored.
struct GridMeasure {
    int base = 2;
    int level = 0;
    Box frame;
    std::map<std::vector<std::int64_t>, double> masses;
};

/// Cell index of x in the level-`level` base-`base` grid over `frame`,
/// or nullopt if x lies outside the frame. Upper frame faces are folded
/// into the last cell so the grid partitions the closed box; coordinates
/// within 1e-9 cell widths below an interior edge bin as if on it, so
/// boundary atoms land where their exact values would.
std::optional<std::vector<std::int64_t>> point_cell_index(const Eigen::Ref<const Point>& x,
                                                          int base, int level, const Box& frame);

/// Mass of the open ball B(x, r). Accumulated in atom order.
double ball_mass(const DiscreteMeasure& m, const Eigen::Ref<const Point>& x, double r);

/// Mass of a region. Accumulated in atom order.
double region_mass(const DiscreteMeasure& m, const Region& e);

/// Open alpha-enlargement: every ball grows by alpha, every cell is replaced
/// by the ball of radius (circumradius + alpha) about its center.
Region enlarge(const Region& e, double alpha);

GridMeasure to_grid(const DiscreteMeasure& m, int base, int level);
GridMeasure to_grid(const DiscreteMeasure& m, int base, int level, const Box& frame);

/// Sum of cell masses raised to q over occupied cells.
double moment_sum(const GridMeasure& g, double q);

/// Smallest box containing all atoms; zero-width axes are padded to width 1.
Box atom_hull(const Eigen::MatrixXd& atoms);

/// One ball around the frame center covering every atom.
Region support_region(const DiscreteMeasure& m);

/// Text format: '#' starts a comment, one atom per line as d coordinates
/// followed by a weight. A '# bbox: lo.. hi..' comment pins the frame.
/// Weight sums within 1e-6 of 1 are renormalized, anything else is rejected.
DiscreteMeasure load_measure(const std::string& path);
void save_measure(const DiscreteMeasure& m, const std::string& path,
                  const std::vector<std::string>& comments = {});

/// Sorted-by-first-coordinate window index for radius queries.
/// Holds a reference; the measure must outlive the index.
class NeighborIndex {
public:
    explicit NeighborIndex(const DiscreteMeasure& m);

    /// Atom indices with |atom - x| < r, ascending.
    std::vector<int> within(const Eigen::Ref<const Point>& x, double r) const;

    /// Equals ball_mass(m, x, r) exactly: summed in ascending atom order.
    double mass_within(const Eigen::Ref<const Point>& x, double r) const;

    /// Distance from x to the nearest atom not equal to index `skip`.
    double nearest_other(const Eigen::Ref<const Point>& x, int skip) const;

private:
    const DiscreteMeasure* m_;
    std::vector<int> order_; // atom indices sorted by coordinate 0
    std::vector<double> key_;

    template <typename Fn>
    void scan(const Eigen::Ref<const Point>& x, double r, Fn&& fn) const;
};

/// Smallest positive distance between two distinct atoms.
double min_atom_gap(const DiscreteMeasure& m);

} // namespace dimlab
