#include "dimlab/ifs.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace dimlab {

namespace {

constexpr double kOrthoTol = 1e-9;
constexpr double kProbSumTol = 1e-6;

void validate_map(const Similarity& s) {
    const auto d = s.translation.size();
    if (d < 1) throw std::invalid_argument("ifs: maps need dimension >= 1");
    if (s.rotation.rows() != d || s.rotation.cols() != d)
        throw std::invalid_argument("ifs: rotation shape does not match translation");
    if (!(s.ratio > 0.0 && s.ratio < 1.0))
        throw std::invalid_argument("ifs: contraction ratio must lie in (0,1)");
    const double defect =
        (s.rotation.transpose() * s.rotation - Eigen::MatrixXd::Identity(d, d))
            .cwiseAbs()
            .maxCoeff();
    if (defect > kOrthoTol)
        throw std::invalid_argument("ifs: rotation is not orthogonal (defect " +
                                    std::to_string(defect) + ")");
}

// Exact AABB of the image of a box under x -> A x + b.
Box map_box(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Box& box) {
    const Eigen::VectorXd c = A * box.center() + b;
    const Eigen::VectorXd h = A.cwiseAbs() * (0.5 * box.extent());
    return Box{c - h, c + h};
}

Box map_box(const Similarity& s, const Box& box) {
    return map_box(s.ratio * s.rotation, s.translation, box);
}

bool is_signed_permutation(const Eigen::MatrixXd& R, double tol = 1e-12) {
    for (Eigen::Index i = 0; i < R.rows(); ++i) {
        int nonzero = 0;
        for (Eigen::Index j = 0; j < R.cols(); ++j) {
            const double a = std::abs(R(i, j));
            if (a > tol) {
                if (std::abs(a - 1.0) > tol) return false;
                ++nonzero;
            }
        }
        if (nonzero != 1) return false;
    }
    return true;
}

} // namespace

Point Similarity::fixed_point() const {
    const auto d = translation.size();
    const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(d, d) - ratio * rotation;
    return A.partialPivLu().solve(translation);
}

Similarity compose(const Similarity& outer, const Similarity& inner) {
    Similarity s;
    s.ratio = outer.ratio * inner.ratio;
    s.rotation = outer.rotation * inner.rotation;
    s.translation = outer.ratio * (outer.rotation * inner.translation) + outer.translation;
    return s;
}

void validate_ifs(const IFSModel& ifs) {
    if (ifs.maps.size() < 2) throw std::invalid_argument("ifs: needs at least two maps");
    const auto d = ifs.maps.front().translation.size();
    for (const auto& s : ifs.maps) {
        validate_map(s);
        if (s.translation.size() != d)
            throw std::invalid_argument("ifs: maps disagree on ambient dimension");
    }
    if (ifs.probs.size() != static_cast<Eigen::Index>(ifs.maps.size()))
        throw std::invalid_argument("ifs: probability count does not match maps");
    if (!(ifs.probs.array() > 0.0).all())
        throw std::invalid_argument("ifs: probabilities must be positive");
    if (std::abs(ifs.probs.sum() - 1.0) > 1e-9)
        throw std::invalid_argument("ifs: probabilities must sum to 1");
}

std::vector<Word> words_of_length(int num_maps, int length) {
    if (num_maps < 1 || length < 0) throw std::invalid_argument("words_of_length: bad arguments");
    std::vector<Word> out;
    Word w(static_cast<size_t>(length), 0);
    while (true) {
        out.push_back(w);
        int i = length - 1;
        while (i >= 0 && w[static_cast<size_t>(i)] == num_maps - 1) {
            w[static_cast<size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++w[static_cast<size_t>(i)];
    }
    return out;
}

Point apply_word(const IFSModel& ifs, const Word& w, const Eigen::Ref<const Point>& x) {
    Point y = x;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        if (*it < 0 || *it >= ifs.num_maps())
            throw std::invalid_argument("apply_word: letter out of range");
        y = ifs.maps[static_cast<size_t>(*it)](y);
    }
    return y;
}

CylinderParams cylinder_params(const IFSModel& ifs, const Word& w) {
    CylinderParams c;
    for (int m : w) {
        if (m < 0 || m >= ifs.num_maps())
            throw std::invalid_argument("cylinder_params: letter out of range");
        c.prob *= ifs.probs[m];
        c.ratio *= ifs.maps[static_cast<size_t>(m)].ratio;
    }
    return c;
}

Box attractor_box(const IFSModel& ifs) {
    validate_ifs(ifs);
    Box box;
    box.lo = ifs.maps.front().fixed_point();
    box.hi = box.lo;
    for (const auto& s : ifs.maps) {
        const Point f = s.fixed_point();
        box.lo = box.lo.cwiseMin(f);
        box.hi = box.hi.cwiseMax(f);
    }
    // Grow monotonically by the map images; stabilizes bitwise, after which
    // every image is contained in the box.
    for (int round = 0; round < 10000; ++round) {
        Box next = box;
        for (const auto& s : ifs.maps) {
            const Box img = map_box(s, box);
            next.lo = next.lo.cwiseMin(img.lo);
            next.hi = next.hi.cwiseMax(img.hi);
        }
        if ((next.lo.array() == box.lo.array()).all() &&
            (next.hi.array() == box.hi.array()).all())
            return box;
        box = next;
    }
    throw std::runtime_error("attractor_box: did not stabilize");
}

DiscreteMeasure build_measure(const IFSModel& ifs, int depth, std::int64_t atom_cap) {
    validate_ifs(ifs);
    if (depth < 0) throw std::invalid_argument("build_measure: depth must be >= 0");
    std::int64_t count = 1;
    for (int i = 0; i < depth; ++i) {
        count *= ifs.num_maps();
        if (count > atom_cap)
            throw std::runtime_error("build_measure: atom count exceeds cap of " +
                                     std::to_string(atom_cap));
    }

    const int d = ifs.ambient_dim();
    const Point x0 = ifs.maps.front().fixed_point();
    Eigen::MatrixXd atoms(count, d);
    Eigen::VectorXd weights(count);

    struct Node {
        Eigen::MatrixXd A;
        Eigen::VectorXd b;
        double p;
    };
    Eigen::Index next = 0;
    // Depth-first in letter order gives lexicographic word order.
    auto emit = [&](auto&& self, const Node& node, int remaining) -> void {
        if (remaining == 0) {
            atoms.row(next) = (node.A * x0 + node.b).transpose();
            weights[next] = node.p;
            ++next;
            return;
        }
        for (int m = 0; m < ifs.num_maps(); ++m) {
            const auto& s = ifs.maps[static_cast<size_t>(m)];
            Node child;
            child.A = node.A * (s.ratio * s.rotation);
            child.b = node.A * s.translation + node.b;
            child.p = node.p * ifs.probs[m];
            self(self, child, remaining - 1);
        }
    };
    emit(emit, Node{Eigen::MatrixXd::Identity(d, d), Eigen::VectorXd::Zero(d), 1.0}, depth);

    return DiscreteMeasure(std::move(atoms), std::move(weights), attractor_box(ifs));
}

OscReport verify_osc(const IFSModel& ifs, const Box& domain) {
    validate_ifs(ifs);
    OscReport rep;
    rep.exact = true;
    for (const auto& s : ifs.maps)
        if (!is_signed_permutation(s.rotation)) rep.exact = false;

    const double tol = 1e-12 * (1.0 + domain.extent().maxCoeff());
    const int m = ifs.num_maps();
    std::vector<Box> images;
    images.reserve(static_cast<size_t>(m));
    for (const auto& s : ifs.maps) images.push_back(map_box(s, domain));

    for (int a = 0; a < m; ++a) {
        const Box& v = images[static_cast<size_t>(a)];
        if ((v.lo.array() < domain.lo.array() - tol).any() ||
            (v.hi.array() > domain.hi.array() + tol).any())
            rep.violations.push_back({a, -1, "image escapes the domain"});
    }
    for (int a = 0; a < m; ++a) {
        for (int b = a + 1; b < m; ++b) {
            const Box& va = images[static_cast<size_t>(a)];
            const Box& vb = images[static_cast<size_t>(b)];
            // Open boxes are disjoint when they separate along some axis.
            bool separated = false;
            for (int j = 0; j < domain.dim() && !separated; ++j)
                separated = va.hi[j] <= vb.lo[j] + tol || vb.hi[j] <= va.lo[j] + tol;
            if (!separated) rep.violations.push_back({a, b, "images overlap"});
        }
    }
    rep.holds = rep.violations.empty();
    return rep;
}

SExtremes s_extremes(const IFSModel& ifs) {
    validate_ifs(ifs);
    SExtremes out;
    out.s_min = std::numeric_limits<double>::infinity();
    out.s_max = -std::numeric_limits<double>::infinity();
    for (int m = 0; m < ifs.num_maps(); ++m) {
        const double s = std::log(ifs.probs[m]) / std::log(ifs.maps[static_cast<size_t>(m)].ratio);
        out.s_min = std::min(out.s_min, s);
        out.s_max = std::max(out.s_max, s);
    }
    return out;
}

IFSModel load_ifs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_ifs: cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    size_t lineno = 0;
    int d = -1;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos) line = line.substr(0, pos);
        std::istringstream ds(line);
        std::vector<double> vals;
        double v;
        while (ds >> v) vals.push_back(v);
        std::string trailing;
        if (ds.clear(), ds >> trailing; !trailing.empty())
            throw std::runtime_error("load_ifs: bad token '" + trailing + "' at line " +
                                     std::to_string(lineno));
        if (vals.empty()) continue;
        if (d < 0) {
            if (vals.size() != 1 || vals[0] != std::floor(vals[0]) || vals[0] < 1)
                throw std::runtime_error("load_ifs: first line must be the ambient dimension");
            d = static_cast<int>(vals[0]);
            continue;
        }
        rows.push_back(std::move(vals));
    }
    if (d < 0) throw std::runtime_error("load_ifs: missing ambient dimension");
    if (rows.size() < 2) throw std::runtime_error("load_ifs: needs at least two maps");

    IFSModel ifs;
    ifs.probs.resize(static_cast<Eigen::Index>(rows.size()));
    const size_t short_len = 2 + static_cast<size_t>(d);
    const size_t full_len = short_len + static_cast<size_t>(d) * static_cast<size_t>(d);
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        Similarity s;
        s.ratio = r[0];
        size_t at = 1;
        if (r.size() == short_len) {
            s.rotation = Eigen::MatrixXd::Identity(d, d);
        } else if (r.size() == full_len) {
            s.rotation.resize(d, d);
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) s.rotation(a, b) = r[at++];
        } else {
            throw std::runtime_error("load_ifs: map " + std::to_string(i + 1) + " has " +
                                     std::to_string(r.size()) + " fields, expected " +
                                     std::to_string(short_len) + " or " + std::to_string(full_len));
        }
        s.translation.resize(d);
        for (int a = 0; a < d; ++a) s.translation[a] = r[at++];
        ifs.probs[static_cast<Eigen::Index>(i)] = r[at];
        ifs.maps.push_back(std::move(s));
    }
    const double total = ifs.probs.sum();
    if (std::abs(total - 1.0) > kProbSumTol)
        throw std::runtime_error("load_ifs: probabilities sum to " + std::to_string(total) +
                                 ", outside the renormalization window");
    if (std::abs(total - 1.0) > 1e-12) ifs.probs /= total; // keep round-trips bitwise
    validate_ifs(ifs);
    return ifs;
}

} // namespace dimlab
