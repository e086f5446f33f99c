#include <doctest.h>

#include "dimlab/ifs.hpp"
#include "helpers.hpp"

#include <cmath>

using namespace dimlab;
using testutil::pt;
using testutil::TempFile;

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

IFSModel four_corners() {
    IFSModel ifs;
    for (double x : {0.0, 0.5})
        for (double y : {0.0, 0.5}) {
            Similarity s;
            s.ratio = 0.5;
            s.rotation = Eigen::MatrixXd::Identity(2, 2);
            s.translation = pt(x, y);
            ifs.maps.push_back(s);
        }
    ifs.probs = Eigen::Vector4d::Constant(0.25);
    return ifs;
}

} // namespace

TEST_CASE("word application composes left to right") {
    const IFSModel ifs = cantor_ifs();
    CHECK(apply_word(ifs, {0, 1}, pt(0.0))[0] == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
    CHECK(apply_word(ifs, {1, 0}, pt(0.0))[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(apply_word(ifs, {}, pt(0.4))[0] == 0.4);
    CHECK_THROWS_AS(apply_word(ifs, {2}, pt(0.0)), std::invalid_argument);
}

TEST_CASE("fixed points and composition") {
    const IFSModel ifs = cantor_ifs();
    CHECK(ifs.maps[0].fixed_point()[0] == doctest::Approx(0.0));
    CHECK(ifs.maps[1].fixed_point()[0] == doctest::Approx(1.0));
    const Similarity both = compose(ifs.maps[0], ifs.maps[1]);
    CHECK(both.ratio == doctest::Approx(1.0 / 9.0));
    CHECK(both(pt(0.0))[0] == doctest::Approx(2.0 / 9.0));
}

TEST_CASE("words enumerate lexicographically") {
    const auto words = words_of_length(2, 3);
    REQUIRE(words.size() == 8);
    CHECK(words.front() == Word{0, 0, 0});
    CHECK(words[1] == Word{0, 0, 1});
    CHECK(words.back() == Word{1, 1, 1});
    CHECK(words_of_length(3, 0) == std::vector<Word>{{}});
}

TEST_CASE("cylinder parameters multiply along the word") {
    const IFSModel ifs = cantor_ifs(0.2);
    const CylinderParams c = cylinder_params(ifs, {0, 1, 1});
    CHECK(c.prob == doctest::Approx(0.2 * 0.8 * 0.8).epsilon(1e-14));
    CHECK(c.ratio == doctest::Approx(std::pow(3.0, -3)).epsilon(1e-14));
}

TEST_CASE("attractor box of the cantor system is the unit interval") {
    const Box box = attractor_box(cantor_ifs());
    CHECK(box.lo[0] == doctest::Approx(0.0));
    CHECK(box.hi[0] == doctest::Approx(1.0));
    const Box sq = attractor_box(four_corners());
    CHECK(sq.lo.isApprox(pt(0.0, 0.0), 1e-12));
    CHECK(sq.hi.isApprox(pt(1.0, 1.0), 1e-12));
}

TEST_CASE("build_measure enumerates cylinders in word order") {
    const DiscreteMeasure m = build_measure(cantor_ifs(), 3);
    REQUIRE(m.size() == 8);
    CHECK((m.weights().array() == 0.125).all());
    for (Eigen::Index i = 0; i + 1 < m.size(); ++i) CHECK(m.atom(i)[0] < m.atom(i + 1)[0]);
    CHECK(m.atom(0)[0] == doctest::Approx(0.0));
    CHECK(m.atom(1)[0] == doctest::Approx(2.0 / 27.0).epsilon(1e-14));

    const DiscreteMeasure biased = build_measure(cantor_ifs(0.2), 2);
    REQUIRE(biased.size() == 4);
    CHECK(biased.weight(0) == doctest::Approx(0.04).epsilon(1e-12));
    CHECK(biased.weight(1) == doctest::Approx(0.16).epsilon(1e-12));
    CHECK(biased.weight(2) == doctest::Approx(0.16).epsilon(1e-12));
    CHECK(biased.weight(3) == doctest::Approx(0.64).epsilon(1e-12));

    CHECK(build_measure(cantor_ifs(), 0).size() == 1);
    CHECK_THROWS_AS(build_measure(cantor_ifs(), 5, 10), std::runtime_error);
}

TEST_CASE("open set condition verdicts") {
    const IFSModel good = cantor_ifs();
    const OscReport ok = verify_osc(good, attractor_box(good));
    CHECK(ok.holds);
    CHECK(ok.exact);
    CHECK(ok.violations.empty());

    const OscReport sq = verify_osc(four_corners(), attractor_box(four_corners()));
    CHECK(sq.holds); // images tile the square, open interiors disjoint
    CHECK(sq.exact);

    // ratio sum above 1 forces interior overlap of the two images
    IFSModel overlapping = cantor_ifs();
    overlapping.maps[0].ratio = 0.6;
    overlapping.maps[1].ratio = 0.6;
    overlapping.maps[1].translation = pt(0.4);
    const OscReport bad = verify_osc(overlapping, attractor_box(overlapping));
    CHECK_FALSE(bad.holds);
    REQUIRE_FALSE(bad.violations.empty());
    CHECK(bad.violations[0].map_b >= 0);

    // domain too small: the second map escapes
    const OscReport escape = verify_osc(good, testutil::interval(0.0, 0.5));
    CHECK_FALSE(escape.holds);
    bool has_containment = false;
    for (const auto& v : escape.violations) has_containment |= (v.map_b == -1);
    CHECK(has_containment);

    // a genuine rotation downgrades the check to bounding boxes
    IFSModel rotated = four_corners();
    const double c = std::cos(0.3), s = std::sin(0.3);
    rotated.maps[0].rotation << c, -s, s, c;
    const OscReport approx = verify_osc(rotated, attractor_box(rotated));
    CHECK_FALSE(approx.exact);
}

TEST_CASE("exponent extremes from probabilities and ratios") {
    const SExtremes se = s_extremes(cantor_ifs(0.2));
    CHECK(se.s_max == doctest::Approx(std::log(0.2) / std::log(1.0 / 3.0)).epsilon(1e-12));
    CHECK(se.s_min == doctest::Approx(std::log(0.8) / std::log(1.0 / 3.0)).epsilon(1e-12));
    const SExtremes uniform = s_extremes(cantor_ifs());
    CHECK(uniform.s_min == doctest::Approx(uniform.s_max));
}

TEST_CASE("ifs parser accepts both row forms") {
    TempFile file("# cantor\n1\n0.3333333333333333 0 0.5\n0.3333333333333333 0.6666666666666666 0.5\n");
    const IFSModel ifs = load_ifs(file.path());
    REQUIRE(ifs.num_maps() == 2);
    CHECK(ifs.ambient_dim() == 1);
    CHECK(ifs.maps[1].translation[0] == doctest::Approx(2.0 / 3.0));

    TempFile rot("2\n0.5 0 -1 1 0 0.1 0.2 0.5\n0.5 1 0 0 1 0.6 0.6 0.5\n");
    const IFSModel r = load_ifs(rot.path());
    CHECK(r.maps[0].rotation(0, 1) == -1.0);
    CHECK(r.maps[0].rotation(1, 0) == 1.0);
    CHECK(r.maps[1].rotation(0, 0) == 1.0);
}

TEST_CASE("ifs parser rejects malformed systems") {
    auto loads = [](const std::string& text) {
        TempFile f(text);
        return load_ifs(f.path());
    };
    CHECK_THROWS(loads("1\n0.5 0 1\n"));                         // single map
    CHECK_THROWS(loads("1\n0.5 0 0.5\n0.5 0.5 0.3\n"));          // probs sum to 0.8
    CHECK_THROWS(loads("1\n1.5 0 0.5\n0.5 0.5 0.5\n"));          // ratio >= 1
    CHECK_THROWS(loads("1\n0.5 0 0.5 9 9\n0.5 0.5 0.5\n"));      // wrong column count
    CHECK_THROWS(loads("2\n0.5 2 0 0 2 0 0 0.5\n0.5 1 0 0 1 0.5 0.5 0.5\n")); // non-orthogonal
    // tiny drift is renormalized
    const IFSModel ok = loads("1\n0.5 0 0.5000000001\n0.5 0.5 0.5\n");
    CHECK(ok.probs.sum() == doctest::Approx(1.0).epsilon(1e-12));
}
