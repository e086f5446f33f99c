#include "dimlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dimlab {

namespace {

constexpr double kWeightSumTol = 1e-9;   // constructor invariant
constexpr double kLoadSumTol = 1e-6;     // loader renormalization window
constexpr double kExactSumTol = 1e-12;   // below this the sum is FP-exact; skip renormalizing
constexpr double kFrameSlack = 1e-9;     // relative jitter allowed at frame faces
constexpr double kCellSnap = 1e-9;       // cell units; boundary atoms bin rightward

void validate(const Eigen::MatrixXd& atoms, const Eigen::VectorXd& weights, const Box& frame) {
    if (atoms.rows() == 0 || atoms.cols() == 0)
        throw std::invalid_argument("measure: needs at least one atom in dimension >= 1");
    if (weights.size() != atoms.rows())
        throw std::invalid_argument("measure: weight count does not match atom count");
    if (!(weights.array() > 0.0).all())
        throw std::invalid_argument("measure: weights must be positive");
    const double total = weights.sum();
    if (std::abs(total - 1.0) > kWeightSumTol)
        throw std::invalid_argument("measure: weights sum to " + std::to_string(total) +
                                    ", expected 1");
    if (frame.lo.size() != atoms.cols() || frame.hi.size() != atoms.cols())
        throw std::invalid_argument("measure: frame dimension does not match atoms");
    for (int j = 0; j < atoms.cols(); ++j) {
        const double slack = kFrameSlack * (1.0 + frame.hi[j] - frame.lo[j]);
        if (atoms.col(j).minCoeff() < frame.lo[j] - slack ||
            atoms.col(j).maxCoeff() > frame.hi[j] + slack)
            throw std::invalid_argument("measure: atom outside frame");
    }
}

} // namespace

Box atom_hull(const Eigen::MatrixXd& atoms) {
    if (atoms.rows() == 0 || atoms.cols() == 0)
        throw std::invalid_argument("atom_hull: needs at least one atom in dimension >= 1");
    Box b;
    b.lo = atoms.colwise().minCoeff().transpose();
    b.hi = atoms.colwise().maxCoeff().transpose();
    for (Eigen::Index j = 0; j < b.lo.size(); ++j) {
        if (b.hi[j] - b.lo[j] <= 0.0) { // pad flat axes so grids stay well defined
            b.lo[j] -= 0.5;
            b.hi[j] += 0.5;
        }
    }
    return b;
}

DiscreteMeasure::DiscreteMeasure(Eigen::MatrixXd atoms, Eigen::VectorXd weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)), frame_(atom_hull(atoms_)) {
    validate(atoms_, weights_, frame_);
}

DiscreteMeasure::DiscreteMeasure(Eigen::MatrixXd atoms, Eigen::VectorXd weights, Box frame)
    : atoms_(std::move(atoms)), weights_(std::move(weights)), frame_(std::move(frame)) {
    validate(atoms_, weights_, frame_);
}

std::optional<std::vector<std::int64_t>> point_cell_index(const Eigen::Ref<const Point>& x,
                                                          int base, int level, const Box& frame) {
    if (base < 2 || level < 0) throw std::invalid_argument("point_cell_index: base >= 2, level >= 0");
    const std::int64_t cells = ipow(base, level);
    std::vector<std::int64_t> idx(static_cast<size_t>(x.size()));
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double w = frame.hi[j] - frame.lo[j];
        double t;
        if (w <= 0.0) {
            if (x[j] != frame.lo[j]) return std::nullopt;
            t = 0.0;
        } else {
            t = (x[j] - frame.lo[j]) / w;
        }
        if (t < -kFrameSlack || t > 1.0 + kFrameSlack) return std::nullopt;
        t = std::clamp(t, 0.0, 1.0);
        // kCellSnap keeps boundary atoms whose coordinates rounded a hair
        // below an exact cell edge in the cell the edge opens
        std::int64_t k =
            static_cast<std::int64_t>(std::floor(t * static_cast<double>(cells) + kCellSnap));
        if (k >= cells) k = cells - 1; // fold the upper face into the last cell
        idx[static_cast<size_t>(j)] = k;
    }
    return idx;
}

bool Region::contains(const Eigen::Ref<const Point>& x) const {
    for (const auto& b : balls)
        if (b.contains(x)) return true;
    for (const auto& c : cells) {
        auto idx = point_cell_index(x, c.base, c.level, frame);
        if (idx && *idx == c.index) return true;
    }
    return false;
}

Region ball_region(Point center, double radius, Box frame) {
    Region e;
    e.balls.push_back(Ball{std::move(center), radius});
    e.frame = std::move(frame);
    return e;
}

double ball_mass(const DiscreteMeasure& m, const Eigen::Ref<const Point>& x, double r) {
    if (r <= 0.0) return 0.0;
    const double rr = r * r;
    double s = 0.0;
    for (Eigen::Index i = 0; i < m.size(); ++i)
        if ((m.atoms().row(i).transpose() - x).squaredNorm() < rr) s += m.weight(i);
    return s;
}

double region_mass(const DiscreteMeasure& m, const Region& e) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < m.size(); ++i)
        if (e.contains(m.atoms().row(i).transpose())) s += m.weight(i);
    return s;
}

Region enlarge(const Region& e, double alpha) {
    if (alpha < 0.0) throw std::invalid_argument("enlarge: alpha must be >= 0");
    Region out;
    out.frame = e.frame;
    out.balls.reserve(e.balls.size() + e.cells.size());
    for (const auto& b : e.balls) out.balls.push_back(Ball{b.center, b.radius + alpha});
    for (const auto& c : e.cells) {
        const Box cb = cell_box(c, e.frame);
        out.balls.push_back(Ball{cb.center(), 0.5 * cb.diameter() + alpha});
    }
    return out;
}

GridMeasure to_grid(const DiscreteMeasure& m, int base, int level) {
    return to_grid(m, base, level, m.frame());
}

GridMeasure to_grid(const DiscreteMeasure& m, int base, int level, const Box& frame) {
    GridMeasure g;
    g.base = base;
    g.level = level;
    g.frame = frame;
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        auto idx = point_cell_index(m.atoms().row(i).transpose(), base, level, frame);
        if (!idx)
            throw std::invalid_argument("to_grid: atom " + std::to_string(i) +
                                        " lies outside the frame");
        g.masses[*idx] += m.weight(i);
    }
    return g;
}

double moment_sum(const GridMeasure& g, double q) {
    double s = 0.0;
    for (const auto& [idx, mass] : g.masses) s += std::pow(mass, q);
    return s;
}

Region support_region(const DiscreteMeasure& m) {
    const Point c = m.frame().center();
    double r2 = 0.0;
    for (Eigen::Index i = 0; i < m.size(); ++i)
        r2 = std::max(r2, (m.atoms().row(i).transpose() - c).squaredNorm());
    return ball_region(c, std::sqrt(r2) + 1.0, m.frame());
}

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

DiscreteMeasure load_measure(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_measure: cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::optional<std::vector<double>> bbox;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string data = line;
        if (auto pos = line.find('#'); pos != std::string::npos) {
            data = line.substr(0, pos);
            std::string comment = line.substr(pos + 1);
            if (auto b = comment.find("bbox:"); b != std::string::npos) {
                std::istringstream cs(comment.substr(b + 5));
                std::vector<double> vals;
                double v;
                while (cs >> v) vals.push_back(v);
                if (vals.empty() || vals.size() % 2 != 0)
                    throw std::runtime_error("load_measure: malformed bbox directive at line " +
                                             std::to_string(lineno));
                bbox = std::move(vals);
            }
        }
        std::istringstream ds(data);
        std::vector<double> vals;
        double v;
        while (ds >> v) vals.push_back(v);
        std::string trailing;
        if (ds.clear(), ds >> trailing; !trailing.empty())
            throw std::runtime_error("load_measure: bad token '" + trailing + "' at line " +
                                     std::to_string(lineno));
        if (vals.empty()) continue;
        if (vals.size() < 2)
            throw std::runtime_error("load_measure: line " + std::to_string(lineno) +
                                     " needs d coordinates and a weight");
        if (!rows.empty() && vals.size() != rows.front().size())
            throw std::runtime_error("load_measure: inconsistent column count at line " +
                                     std::to_string(lineno));
        rows.push_back(std::move(vals));
    }
    if (rows.empty()) throw std::runtime_error("load_measure: no atoms in " + path);

    const int d = static_cast<int>(rows.front().size()) - 1;
    Eigen::MatrixXd atoms(static_cast<Eigen::Index>(rows.size()), d);
    Eigen::VectorXd weights(static_cast<Eigen::Index>(rows.size()));
    for (size_t i = 0; i < rows.size(); ++i) {
        for (int j = 0; j < d; ++j) atoms(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<size_t>(j)];
        weights[static_cast<Eigen::Index>(i)] = rows[i][static_cast<size_t>(d)];
    }
    if (!(weights.array() > 0.0).all())
        throw std::runtime_error("load_measure: weights must be positive");
    const double total = weights.sum();
    if (std::abs(total - 1.0) > kLoadSumTol)
        throw std::runtime_error("load_measure: weights sum to " + std::to_string(total) +
                                 ", outside the renormalization window");
    if (std::abs(total - 1.0) > kExactSumTol) weights /= total; // keep round-trips bitwise

    if (bbox) {
        if (static_cast<int>(bbox->size()) != 2 * d)
            throw std::runtime_error("load_measure: bbox directive rank does not match atoms");
        Box frame;
        frame.lo = Eigen::Map<Eigen::VectorXd>(bbox->data(), d);
        frame.hi = Eigen::Map<Eigen::VectorXd>(bbox->data() + d, d);
        if (!(frame.lo.array() <= frame.hi.array()).all())
            throw std::runtime_error("load_measure: bbox has lo > hi");
        return DiscreteMeasure(std::move(atoms), std::move(weights), std::move(frame));
    }
    return DiscreteMeasure(std::move(atoms), std::move(weights));
}

void save_measure(const DiscreteMeasure& m, const std::string& path,
                  const std::vector<std::string>& comments) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_measure: cannot open " + path);
    for (const auto& c : comments) out << "# " << c << "\n";
    out << "# bbox:";
    for (Eigen::Index j = 0; j < m.frame().lo.size(); ++j) out << ' ' << fmt17(m.frame().lo[j]);
    for (Eigen::Index j = 0; j < m.frame().hi.size(); ++j) out << ' ' << fmt17(m.frame().hi[j]);
    out << "\n";
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        for (int j = 0; j < m.ambient_dim(); ++j) out << fmt17(m.atoms()(i, j)) << ' ';
        out << fmt17(m.weight(i)) << "\n";
    }
    if (!out) throw std::runtime_error("save_measure: write failed for " + path);
}

NeighborIndex::NeighborIndex(const DiscreteMeasure& m) : m_(&m) {
    const int n = static_cast<int>(m.size());
    order_.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) order_[static_cast<size_t>(i)] = i;
    std::sort(order_.begin(), order_.end(), [&](int a, int b) {
        const double xa = m.atoms()(a, 0), xb = m.atoms()(b, 0);
        return xa < xb || (xa == xb && a < b);
    });
    key_.resize(order_.size());
    for (size_t i = 0; i < order_.size(); ++i) key_[i] = m.atoms()(order_[i], 0);
}

template <typename Fn>
void NeighborIndex::scan(const Eigen::Ref<const Point>& x, double r, Fn&& fn) const {
    const auto lo = std::lower_bound(key_.begin(), key_.end(), x[0] - r);
    const double rr = r * r;
    for (auto it = lo; it != key_.end() && *it <= x[0] + r; ++it) {
        const int i = order_[static_cast<size_t>(it - key_.begin())];
        if ((m_->atoms().row(i).transpose() - x).squaredNorm() < rr) fn(i);
    }
}

std::vector<int> NeighborIndex::within(const Eigen::Ref<const Point>& x, double r) const {
    std::vector<int> out;
    if (r <= 0.0) return out;
    scan(x, r, [&](int i) { out.push_back(i); });
    std::sort(out.begin(), out.end());
    return out;
}

double NeighborIndex::mass_within(const Eigen::Ref<const Point>& x, double r) const {
    const std::vector<int> idx = within(x, r);
    double s = 0.0;
    for (int i : idx) s += m_->weight(i);
    return s;
}

double NeighborIndex::nearest_other(const Eigen::Ref<const Point>& x, int skip) const {
    const auto start = std::lower_bound(key_.begin(), key_.end(), x[0]);
    auto pos = static_cast<std::ptrdiff_t>(start - key_.begin());
    std::ptrdiff_t l = pos - 1, rgt = pos;
    const auto n = static_cast<std::ptrdiff_t>(key_.size());
    double best = std::numeric_limits<double>::infinity();
    auto visit = [&](std::ptrdiff_t p) {
        const int i = order_[static_cast<size_t>(p)];
        if (i == skip) return;
        best = std::min(best, (m_->atoms().row(i).transpose() - x).norm());
    };
    while (l >= 0 || rgt < n) {
        const double dl = l >= 0 ? x[0] - key_[static_cast<size_t>(l)] : std::numeric_limits<double>::infinity();
        const double dr = rgt < n ? key_[static_cast<size_t>(rgt)] - x[0] : std::numeric_limits<double>::infinity();
        if (std::min(dl, dr) >= best) break;
        if (dl <= dr) visit(l--); else visit(rgt++);
    }
    return best;
}

double min_atom_gap(const DiscreteMeasure& m) {
    if (m.size() < 2) return std::numeric_limits<double>::infinity();
    NeighborIndex idx(m);
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m.size(); ++i)
        best = std::min(best, idx.nearest_other(m.atoms().row(i).transpose(), static_cast<int>(i)));
    return best;
}

} // namespace dimlab
