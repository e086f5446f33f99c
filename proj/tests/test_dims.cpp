#include <doctest.h>

#include "dimlab/dims.hpp"
#include "helpers.hpp"

#include <cmath>

using namespace dimlab;
using testutil::cantor_measure;
using testutil::interval;
using testutil::line_measure;
using testutil::pt;

namespace {

IFSModel cantor_ifs(double p0 = 0.5) {
    IFSModel ifs;
    Similarity a, b;
    a.ratio = b.ratio = 1.0 / 3.0;
    a.rotation = b.rotation = Eigen::MatrixXd::Identity(1, 1);
    a.translation = pt(0.0);
    b.translation = pt(2.0 / 3.0);
    ifs.maps = {a, b};
    ifs.probs = Eigen::Vector2d(p0, 1.0 - p0);
    return ifs;
}

ScaleConfig ladder36() {
    ScaleConfig cfg;
    cfg.base = 3;
    cfg.k_lo = 3;
    cfg.k_hi = 6;
    return cfg;
}

// Exact moment exponent of the two-branch ratio-1/3 system: cylinder masses
// at level k are the products, so log of the moment sum grows linearly.
double tau_closed_form(double p0, double q) {
    return std::log(std::pow(p0, q) + std::pow(1.0 - p0, q)) / std::log(3.0);
}

} // namespace

TEST_CASE("scale config validation and ladder radii") {
    CHECK(ladder_radius(ladder36(), 2) == doctest::Approx(1.0 / 9.0));
    ScaleConfig bad = ladder36();
    bad.k_hi = bad.k_lo + 1;
    CHECK_THROWS_AS(validate_scale_config(bad), std::invalid_argument);
    bad = ladder36();
    bad.base = 1;
    CHECK_THROWS_AS(validate_scale_config(bad), std::invalid_argument);
    bad = ladder36();
    bad.dilation = 0.0;
    CHECK_THROWS_AS(validate_scale_config(bad), std::invalid_argument);
}

TEST_CASE("tau matches the closed form on cantor measures") {
    for (double p0 : {0.5, 0.2}) {
        const DiscreteMeasure m = build_measure(cantor_ifs(p0), 8);
        for (double q : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
            const DimValue v = tau(m, q, ladder36());
            CHECK(v.value == doctest::Approx(tau_closed_form(p0, q)).epsilon(1e-9));
            CHECK(v.slope.lower <= v.slope.ols + 1e-12);
            CHECK(v.slope.ols <= v.slope.upper + 1e-12);
            CHECK(v.series.entries.size() == 4);
        }
    }
}

TEST_CASE("packing-mode tau agrees with covering-mode on cantor") {
    const DiscreteMeasure m = build_measure(cantor_ifs(), 8);
    ScaleConfig pack = ladder36();
    pack.mode = Mode::Packing;
    for (double q : {-1.0, 0.0, 1.0}) {
        const double cov = tau(m, q, ladder36()).value;
        CHECK(tau(m, q, pack).value == doctest::Approx(cov).epsilon(1e-9));
        ScaleConfig dilated = pack;
        dilated.dilation = 2.0;
        CHECK(std::abs(tau(m, q, dilated).value - cov) <= 0.08);
    }
}

TEST_CASE("global mass exponents hit the similarity exponents") {
    const DiscreteMeasure uniform = build_measure(cantor_ifs(), 8);
    const double s = std::log(2.0) / std::log(3.0);
    const DPair du = D_extremes(uniform, ladder36());
    CHECK(du.minus.value == doctest::Approx(s).epsilon(1e-9));
    CHECK(du.plus.value == doctest::Approx(s).epsilon(1e-9));

    const DiscreteMeasure biased = build_measure(cantor_ifs(0.2), 8);
    const SExtremes se = s_extremes(cantor_ifs(0.2));
    const DPair db = D_extremes(biased, ladder36());
    CHECK(db.minus.value == doctest::Approx(se.s_max).epsilon(1e-9));
    CHECK(db.plus.value == doctest::Approx(se.s_min).epsilon(1e-9));
}

TEST_CASE("net-uniform exponents are variant-insensitive on cantor") {
    const IFSModel ifs = cantor_ifs(0.2);
    const DiscreteMeasure m = build_measure(ifs, 8);
    const SExtremes se = s_extremes(ifs);
    const std::vector<SampleNet> nets = {cylinder_net(ifs, 1), cylinder_net(ifs, 2)};
    for (Variant variant : {Variant::Centers, Variant::Intersecting}) {
        const DPair d = D_unif(m, nets, variant, ladder36());
        CHECK(d.minus.value == doctest::Approx(se.s_max).epsilon(1e-9));
        CHECK(d.plus.value == doctest::Approx(se.s_min).epsilon(1e-9));
    }
}

TEST_CASE("localized max/min exponents agree with the closed form") {
    const IFSModel ifs = cantor_ifs(0.2);
    const DiscreteMeasure m = build_measure(ifs, 8);
    const SExtremes se = s_extremes(ifs);
    const InnerNets inner = inner_net_builder(m, {2, 4});
    const DQuad quad = D_unif_max_min(m, cylinder_net(ifs, 2), inner, Variant::Centers, ladder36());
    CHECK(quad.unif_max_minus.value == doctest::Approx(se.s_max).epsilon(1e-9));
    CHECK(quad.max_minus.value == doctest::Approx(se.s_max).epsilon(1e-9));
    CHECK(quad.unif_min_plus.value == doctest::Approx(se.s_min).epsilon(1e-9));
    CHECK(quad.min_plus.value == doctest::Approx(se.s_min).epsilon(1e-9));
}

TEST_CASE("localized tau variants collapse on a self-similar measure") {
    const IFSModel ifs = cantor_ifs();
    const DiscreteMeasure m = build_measure(ifs, 8);
    const std::vector<SampleNet> nets = {cylinder_net(ifs, 1), cylinder_net(ifs, 2)};
    // the localization ball itself as the inner net: each outer ball holds
    // exactly one 2-cylinder, so every localization is an exact scaled copy
    const InnerNets identity = [](const Point& z, double kappa) {
        SampleNet net;
        net.centers = z.transpose();
        net.rho = kappa;
        return std::vector<SampleNet>{net};
    };
    const InnerNets sampled = inner_net_builder(m, {2, 4});
    for (double q : {0.0, 2.0}) {
        const double global = tau(m, q, ladder36()).value;
        CHECK(tau_loc(m, q, nets, ladder36()).value == doctest::Approx(global).epsilon(1e-9));
        CHECK(tau_loc_max(m, q, cylinder_net(ifs, 2), identity, ladder36()).value ==
              doctest::Approx(global).epsilon(1e-9));
        // atom-subsampled inner balls cut cylinders, so only a window holds
        CHECK(std::abs(tau_loc_max(m, q, cylinder_net(ifs, 2), sampled, ladder36()).value -
                       global) <= 0.12);
    }
    CHECK_THROWS_AS(tau_loc(m, 0.0, {}, ladder36()), std::invalid_argument);
}

TEST_CASE("single-atom support has zero exponents") {
    const auto solo = line_measure({0.5}, {1.0});
    CHECK(tau(solo, 0.0, ladder36()).value == 0.0);
    const DPair d = D_extremes(solo, ladder36());
    CHECK(d.minus.value == 0.0);
    CHECK(d.plus.value == 0.0);
}

TEST_CASE("doubling ratio equals a direct sweep") {
    const auto m = line_measure({0.0, 0.4, 0.41, 1.0}, {0.1, 0.2, 0.3, 0.4});
    ScaleConfig cfg;
    cfg.base = 2;
    cfg.k_lo = 1;
    cfg.k_hi = 4;
    const DoublingReport rep = doubling_ratio(m, m.atoms(), cfg);
    double expect = 0.0;
    int pairs = 0;
    for (Eigen::Index i = 0; i < m.size(); ++i)
        for (int k = cfg.k_lo; k <= cfg.k_hi; ++k) {
            const double r = std::pow(2.0, -k);
            const double den = ball_mass(m, m.atom(i), r);
            if (den <= 0.0) continue;
            ++pairs;
            expect = std::max(expect, ball_mass(m, m.atom(i), 2.0 * r) / den);
        }
    CHECK(rep.max_ratio == expect); // same ball pairs, bitwise
    CHECK(rep.evaluated == pairs);
    CHECK(rep.per_scale.entries.size() == 4);
    CHECK_THROWS_AS(doubling_ratio(m, Eigen::MatrixXd(0, 1), cfg), std::invalid_argument);
}

TEST_CASE("doubling ratio stays near the branch-mass bound on cantor") {
    const DiscreteMeasure biased = build_measure(cantor_ifs(0.2), 8);
    const DoublingReport rep = doubling_ratio(biased, biased.atoms(), ladder36());
    CHECK(rep.max_ratio <= 5.0 + 1e-9);
    CHECK(rep.max_ratio >= 2.0);
}

TEST_CASE("measure dims isolate the graded cell") {
    const DiscreteMeasure pi = build_measure(cantor_ifs(), 6);
    Eigen::MatrixXd one(1, 1);
    one(0, 0) = 0.0;
    const DiscreteMeasure delta(one, Eigen::VectorXd::Constant(1, 1.0), pi.frame());

    // level-6 cells isolate single atoms: the local estimate is flat zero
    const DimValue small =
        measure_dims(delta, pi, 0.0, 0.5, MeasureDimKind::Small, BoundSide::Upper, 6, ladder36());
    CHECK(small.value == 0.0);

    // mu = pi keeps most cylinders: the big kind sees the full scaling
    const double s = std::log(2.0) / std::log(3.0);
    for (BoundSide side : {BoundSide::Lower, BoundSide::Upper}) {
        const DimValue big =
            measure_dims(pi, pi, 0.0, 0.3, MeasureDimKind::Big, side, 2, ladder36());
        CHECK(big.value == doctest::Approx(s).epsilon(1e-9));
    }

    CHECK_THROWS_AS(
        measure_dims(delta, pi, 0.0, 1.5, MeasureDimKind::Small, BoundSide::Upper, 2, ladder36()),
        std::invalid_argument);
}

TEST_CASE("cylinder and grid nets cover their sources") {
    const IFSModel ifs = cantor_ifs();
    const SampleNet net = cylinder_net(ifs, 2);
    REQUIRE(net.centers.rows() == 4);
    for (Eigen::Index i = 0; i + 1 < net.centers.rows(); ++i)
        CHECK(net.centers(i, 0) < net.centers(i + 1, 0));
    CHECK(net.rho == doctest::Approx(0.75 / 9.0).epsilon(1e-9));
    CHECK_THROWS_AS(cylinder_net(ifs, 2, 0.4), std::invalid_argument);

    Eigen::MatrixXd atoms(4, 1);
    atoms << 0.0, 1.0, 1.5, 2.0;
    const DiscreteMeasure m(atoms, Eigen::VectorXd::Constant(4, 0.25), interval(0.0, 2.0));
    const SampleNet g = grid_net(m, 2, 1);
    REQUIRE(g.centers.rows() == 2);
    CHECK(g.centers(0, 0) == doctest::Approx(0.5));
    CHECK(g.centers(1, 0) == doctest::Approx(1.5));
    CHECK(g.rho == doctest::Approx(1.0));
}

TEST_CASE("inner net builder subsamples the localization ball") {
    std::vector<double> xs, ws;
    for (int i = 0; i < 10; ++i) {
        xs.push_back(0.1 * i);
        ws.push_back(0.1);
    }
    const auto m = line_measure(std::move(xs), std::move(ws));
    const InnerNets inner = inner_net_builder(m, {4, 2}, 0.5);
    const auto nets = inner(pt(0.5), 0.3);
    REQUIRE(nets.size() == 2);
    CHECK(nets[0].rho == doctest::Approx(0.15));
    REQUIRE(nets[0].centers.rows() == 2); // counts are sorted ascending
    CHECK(nets[0].centers(0, 0) == doctest::Approx(0.4));
    CHECK(nets[0].centers(1, 0) == doctest::Approx(0.6));
    REQUIRE(nets[1].centers.rows() == 3); // only three atoms in the ring
    CHECK(nets[1].centers(1, 0) == doctest::Approx(0.5));

    CHECK(inner(pt(25.0), 0.3).empty());
    CHECK_THROWS_AS(inner_net_builder(m, {}), std::invalid_argument);
    CHECK_THROWS_AS(inner_net_builder(m, {0}), std::invalid_argument);
    CHECK_THROWS_AS(inner_net_builder(m, {2}, 1.5), std::invalid_argument);
}
