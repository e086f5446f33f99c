#pragma once

#include "dimlab/measure.hpp"

namespace dimlab {

/// Raised when a metric input exceeds the support-size cap.
struct SupportCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Optimal test function on the union support: 1-Lipschitz, bounded by 1.
struct LipschitzWitness {
    Eigen::MatrixXd points;
    Eigen::VectorXd values;
};

struct MetricResult {
    double distance = 0.0;
    LipschitzWitness witness;
};

/// Bounded-Lipschitz distance sup { int f dmu - int f dnu : |f| <= 1,
/// Lip(f) <= 1 }, solved exactly as a min-cost flow on the union support with
/// a slack node whose unit-cost arcs enforce the sup bound. The returned
/// witness is re-verified by enumeration (feasibility and primal-dual
/// agreement within 1e-9); a failed certificate throws.
MetricResult fortet_mourier(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                            Eigen::Index support_cap = 400);

struct EnlargementReport {
    double distance = 0.0;
    double eta = 0.0;     // alpha * beta
    bool premise = false; // distance < eta
    double lhs = 0.0;     // mu(E)
    double rhs = 0.0;     // nu(E enlarged by alpha) + beta
    bool holds = true;    // premise implies lhs <= rhs (within 1e-12)
};

/// Checks the enlargement comparison mu(E) <= nu(E(alpha)) + beta whenever
/// the distance is below alpha*beta.
EnlargementReport enlargement_check(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                    const Region& e, double alpha, double beta);

} // namespace dimlab
