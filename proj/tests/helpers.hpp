#pragma once

#include "dimlab/measure.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace testutil {

inline dimlab::Point pt(double x) {
    dimlab::Point p(1);
    p[0] = x;
    return p;
}

inline dimlab::Point pt(double x, double y) {
    dimlab::Point p(2);
    p[0] = x;
    p[1] = y;
    return p;
}

inline dimlab::Box interval(double lo, double hi) {
    dimlab::Box b;
    b.lo = dimlab::Point::Constant(1, lo);
    b.hi = dimlab::Point::Constant(1, hi);
    return b;
}

// Depth-n middle-thirds Cantor measure built directly from ternary words,
// independent of the ifs module. Atom order follows the word enumeration.
inline dimlab::DiscreteMeasure cantor_measure(int depth, double p0 = 0.5) {
    const int n = 1 << depth;
    Eigen::MatrixXd atoms(n, 1);
    Eigen::VectorXd weights(n);
    for (int i = 0; i < n; ++i) {
        double x = 0.0, w = 1.0, scale = 1.0;
        for (int b = depth - 1; b >= 0; --b) {
            scale /= 3.0;
            const bool right = (i >> b) & 1;
            x += right ? 2.0 * scale : 0.0;
            w *= right ? (1.0 - p0) : p0;
        }
        atoms(i, 0) = x;
        weights[i] = w;
    }
    return dimlab::DiscreteMeasure(std::move(atoms), std::move(weights), interval(0.0, 1.0));
}

inline dimlab::DiscreteMeasure line_measure(std::vector<double> xs, std::vector<double> ws) {
    Eigen::MatrixXd atoms(static_cast<Eigen::Index>(xs.size()), 1);
    Eigen::VectorXd weights(static_cast<Eigen::Index>(ws.size()));
    for (size_t i = 0; i < xs.size(); ++i) atoms(static_cast<Eigen::Index>(i), 0) = xs[i];
    for (size_t i = 0; i < ws.size(); ++i) weights[static_cast<Eigen::Index>(i)] = ws[i];
    return dimlab::DiscreteMeasure(std::move(atoms), std::move(weights));
}

// Unique temp file that removes itself.
class TempFile {
public:
    explicit TempFile(const std::string& contents, const std::string& stem = "dimlab_test") {
        static int counter = 0;
        path_ = (std::filesystem::temp_directory_path() /
                 (stem + "_" + std::to_string(++counter) + ".txt"))
                    .string();
        std::ofstream out(path_);
        out << contents;
    }
    ~TempFile() { std::filesystem::remove(path_); }
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

} // namespace testutil
