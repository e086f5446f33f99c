#include <doctest.h>

#include "dimlab/metric.hpp"
#include "helpers.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace dimlab;
using testutil::line_measure;
using testutil::pt;

namespace {

// Exact bounded-Lipschitz distance in one dimension: integral of the absolute
// CDF difference. The sup bound is inactive on supports of diameter <= 2.
double cdf_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    std::vector<std::pair<double, double>> deltas;
    for (Eigen::Index i = 0; i < mu.size(); ++i) deltas.push_back({mu.atom(i)[0], mu.weight(i)});
    for (Eigen::Index i = 0; i < nu.size(); ++i) deltas.push_back({nu.atom(i)[0], -nu.weight(i)});
    std::sort(deltas.begin(), deltas.end());
    double total = 0.0, cum = 0.0;
    for (size_t i = 0; i + 1 < deltas.size(); ++i) {
        cum += deltas[i].second;
        total += std::abs(cum) * (deltas[i + 1].first - deltas[i].first);
    }
    return total;
}

DiscreteMeasure random_measure(std::mt19937& rng, int max_atoms, int dim) {
    std::uniform_int_distribution<int> count(1, max_atoms);
    std::uniform_real_distribution<double> coord(0.0, 1.0);
    std::uniform_real_distribution<double> mass(0.05, 1.0);
    const int n = count(rng);
    Eigen::MatrixXd atoms(n, dim);
    Eigen::VectorXd weights(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < dim; ++j) atoms(i, j) = coord(rng);
        weights[i] = mass(rng);
    }
    weights /= weights.sum();
    return DiscreteMeasure(std::move(atoms), std::move(weights));
}

} // namespace

TEST_CASE("distance matches the cdf integral on the line") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const DiscreteMeasure mu = random_measure(rng, 6, 1);
        const DiscreteMeasure nu = random_measure(rng, 6, 1);
        const MetricResult res = fortet_mourier(mu, nu);
        CHECK(std::abs(res.distance - cdf_distance(mu, nu)) <= 1e-9);
    }
}

TEST_CASE("point masses pay the travel cost capped by the sup bound") {
    const auto zero = line_measure({0.0}, {1.0});
    CHECK(std::abs(fortet_mourier(zero, line_measure({0.7}, {1.0})).distance - 0.7) <= 1e-9);
    // beyond diameter 2 the two-indicator function is cheaper than transport
    CHECK(std::abs(fortet_mourier(zero, line_measure({3.0}, {1.0})).distance - 2.0) <= 1e-9);
    Eigen::MatrixXd far(1, 2);
    far << 3.0, 4.0;
    Eigen::MatrixXd origin(1, 2);
    origin << 0.0, 0.0;
    const DiscreteMeasure a(origin, Eigen::VectorXd::Constant(1, 1.0));
    const DiscreteMeasure b(far, Eigen::VectorXd::Constant(1, 1.0));
    CHECK(std::abs(fortet_mourier(a, b).distance - 2.0) <= 1e-9);
}

TEST_CASE("a split pair transported to its midpoint") {
    Eigen::MatrixXd ends(2, 2), mid(1, 2);
    ends << 0.0, 0.0, 1.0, 0.0;
    mid << 0.5, 0.0;
    const DiscreteMeasure mu(ends, Eigen::VectorXd::Constant(2, 0.5));
    const DiscreteMeasure nu(mid, Eigen::VectorXd::Constant(1, 1.0));
    CHECK(std::abs(fortet_mourier(mu, nu).distance - 0.5) <= 1e-9);
}

TEST_CASE("metric axioms hold on random instances") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        const DiscreteMeasure a = random_measure(rng, 5, 2);
        const DiscreteMeasure b = random_measure(rng, 5, 2);
        const DiscreteMeasure c = random_measure(rng, 5, 2);
        const double ab = fortet_mourier(a, b).distance;
        const double ba = fortet_mourier(b, a).distance;
        const double ac = fortet_mourier(a, c).distance;
        const double cb = fortet_mourier(c, b).distance;
        CHECK(std::abs(ab - ba) <= 1e-9);
        CHECK(ab <= ac + cb + 1e-9);
        CHECK(ab >= -1e-12);
        CHECK(fortet_mourier(a, a).distance <= 1e-12);
    }
}

TEST_CASE("witness is feasible and attains the distance") {
    std::mt19937 rng(31);
    const DiscreteMeasure mu = random_measure(rng, 6, 2);
    const DiscreteMeasure nu = random_measure(rng, 6, 2);
    const MetricResult res = fortet_mourier(mu, nu);
    const auto& w = res.witness;
    REQUIRE(w.points.rows() == w.values.size());
    for (Eigen::Index i = 0; i < w.points.rows(); ++i) {
        CHECK(std::abs(w.values[i]) <= 1.0 + 1e-12);
        for (Eigen::Index j = i + 1; j < w.points.rows(); ++j) {
            const double d = (w.points.row(i) - w.points.row(j)).norm();
            CHECK(std::abs(w.values[i] - w.values[j]) <= d + 1e-9);
        }
    }
    double pairing = 0.0;
    for (Eigen::Index i = 0; i < w.points.rows(); ++i) {
        double signed_mass = 0.0;
        for (Eigen::Index k = 0; k < mu.size(); ++k)
            if ((mu.atom(k) - w.points.row(i).transpose()).norm() == 0.0)
                signed_mass += mu.weight(k);
        for (Eigen::Index k = 0; k < nu.size(); ++k)
            if ((nu.atom(k) - w.points.row(i).transpose()).norm() == 0.0)
                signed_mass -= nu.weight(k);
        pairing += signed_mass * w.values[i];
    }
    CHECK(std::abs(pairing - res.distance) <= 1e-9);
}

TEST_CASE("support cap rejects oversized inputs") {
    std::mt19937 rng(41);
    const DiscreteMeasure big = random_measure(rng, 5, 1);
    CHECK_THROWS_AS(fortet_mourier(big, big, big.size() - 1), SupportCapError);
    const auto one = line_measure({0.0}, {1.0});
    Eigen::MatrixXd flat(1, 2);
    flat << 0.0, 0.0;
    const DiscreteMeasure planar(flat, Eigen::VectorXd::Constant(1, 1.0));
    CHECK_THROWS_AS(fortet_mourier(one, planar), std::invalid_argument);
}

TEST_CASE("enlargement comparison reports both sides") {
    const auto mu = line_measure({0.0}, {1.0});
    const auto nu = line_measure({0.05, 1.0}, {0.9, 0.1});
    Region e;
    e.frame = mu.frame();
    e.balls.push_back({pt(0.0), 0.01});
    const EnlargementReport rep = enlargement_check(mu, nu, e, 0.1, 2.0);
    CHECK(rep.premise); // distance ~0.145 < 0.2
    CHECK(rep.lhs == doctest::Approx(1.0));
    CHECK(rep.rhs == doctest::Approx(0.9 + 2.0));
    CHECK(rep.holds);

    const EnlargementReport tight = enlargement_check(mu, nu, e, 0.001, 0.001);
    CHECK_FALSE(tight.premise); // eta far below the distance
    CHECK(tight.holds);         // vacuous
    CHECK_THROWS_AS(enlargement_check(mu, nu, e, -1.0, 0.5), std::invalid_argument);
}
