#pragma once

#include "dimlab/counting.hpp"

#include <optional>

namespace dimlab {

/// Raised when the scale scan finds no radius meeting the density target.
struct ScanExhaustedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Packing-backed surrogate measure around a base point: centers of a greedy
/// packing of B(x,s), weighted by their normalized ball-mass moments.
struct WeightedPackingMeasure {
    Point base_point;
    double scale = 1.0;  // s
    double q = 0.0;
    double t = 0.0;
    int scan_index = 0;  // accepted j, radius = s * base^-j
    double radius = 0.0; // accepted packing radius, in (0, s)
    double moment_sum = 0.0;
    PackingResult packing;
    std::optional<DiscreteMeasure> measure; // engaged on success
};

/// Scans radii s*base^-j for j = 1,2,...,j_max until the packing moment sum
/// reaches r^-t, then freezes the packing into a measure. Throws
/// ScanExhaustedError when no scanned radius reaches the target.
WeightedPackingMeasure weighted_packing_measure(const DiscreteMeasure& pi,
                                                const Eigen::Ref<const Point>& x, double s,
                                                double q, double t, int base = 3, int j_max = 40);

/// Convex combination: atoms stacked in component order, weights scaled by
/// the mixture coefficients. Coefficients must be positive and sum to 1.
DiscreteMeasure mix(const std::vector<std::pair<double, DiscreteMeasure>>& components);

/// Measure on the first n rows of `points`; uniform weights unless given.
/// Given weights within 1e-6 of total 1 are renormalized.
DiscreteMeasure finite_net_measure(const Eigen::MatrixXd& points, Eigen::Index n,
                                   std::optional<Eigen::VectorXd> weights = std::nullopt);

/// lambda * inner + (1-lambda) * outer, with the inner support inside
/// B(z, kappa) and the outer support at distance >= kappa + 2*margin from z.
DiscreteMeasure localized_mixture(const DiscreteMeasure& inner, const DiscreteMeasure& outer,
                                  const Eigen::Ref<const Point>& z, double kappa, double lambda,
                                  double margin);

} // namespace dimlab
