#include "doctest.h"

#include "olb/expansions.hpp"
#include "olb/lazutkin.hpp"

#include <random>

using namespace olb;

namespace {

const CurveModel& unit_circle() {
    static const CurveModel m = CurveModel::build(CurveSpec::circle(1.0));
    return m;
}
const CurveModel& ellipse21() {
    static const CurveModel m = CurveModel::build(CurveSpec::ellipse(2.0, 1.0));
    return m;
}
const CurveModel& perturbed() {
    static const CurveModel m = CurveModel::build(CurveSpec::perturbed_circle(0.05));
    return m;
}
const CurveModel& second_harmonic() {
    static const CurveModel m = CurveModel::build(CurveSpec::perturbed_circle(0.05, 2));
    return m;
}

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("Lazutkin chart") {
    CHECK(lazutkin_x(unit_circle(), 1.0) == doctest::Approx(1.0 / kTwoPi).epsilon(1e-14));
    for (const CurveModel* m : {&ellipse21(), &perturbed()}) {
        const double l = m->length();
        for (double s : {0.0, 0.1 * l, 0.37 * l, 0.9 * l, 1.3 * l}) {
            CHECK(lazutkin_inverse(*m, lazutkin_x(*m, s)) == doctest::Approx(s).epsilon(1e-12));
            CHECK(lazutkin_x(*m, s + l) - lazutkin_x(*m, s) == doctest::Approx(1.0).epsilon(1e-13));
        }
        CHECK(lazutkin_x(*m, 0.3 * l) < lazutkin_x(*m, 0.31 * l));
    }
}

TEST_CASE("circle is a pure rotation in Lazutkin coordinates") {
    for (double x : {0.0, 0.2, 0.71})
        for (double y : {1e-3, 0.05, 0.2}) {
            const LazutkinPoint p = conjugated_step(unit_circle(), {x, y});
            CHECK(p.x == x + y);
            CHECK(std::abs(p.y - y) < 1e-12);
        }
}

TEST_CASE("Lazutkin remainder is O(y^4)") {
    for (const CurveModel* m : {&perturbed(), &second_harmonic()}) {
        const SlopeReport r = lazutkin_check(*m);
        INFO("slope " << r.slope);
        CHECK(r.pass());
    }
    // ellipses are integrable and the Lazutkin width is exactly invariant
    double worst = 0.0;
    for (double x : {0.1, 0.35, 0.6})
        for (double y : {1e-3, 1e-2, 5e-2}) worst = std::max(worst, std::abs(conjugated_step(ellipse21(), {x, y}).y - y));
    CHECK(worst < 1e-13);
    CHECK(kind_of([] { conjugated_step(unit_circle(), {0.0, 0.0}); }) == ErrorKind::DegeneratePair);
}

TEST_CASE("confocal ellipses") {
    const CurveSpec g = confocal_ellipse(2.0, 1.0, 1.0);
    CHECK(g.a == doctest::Approx(std::sqrt(5.0)));
    CHECK(g.b == doctest::Approx(std::sqrt(2.0)));
    CHECK(g.a * g.a - g.b * g.b == doctest::Approx(3.0));
    CHECK(kind_of([] { confocal_ellipse(2.0, 1.0, 0.0); }) == ErrorKind::BadParams);
    CHECK(kind_of([] { confocal_ellipse(1.0, 2.0, 1.0); }) == ErrorKind::BadParams);
    CHECK(kind_of([] { ellipse_axes(CurveSpec::perturbed_circle(0.05)); }) == ErrorKind::BadParams);
    CHECK(std::abs(ellipse_support_residual(2.0, 1.0, ellipse_point(2.0, 1.0, 0.7))) < 1e-15);
    CHECK(ellipse_support_residual(2.0, 1.0, {3.0, 0.0}) == doctest::Approx(1.0));
}

TEST_CASE("confocal ellipses are caustics") {
    const double l = ellipse21().length();
    for (auto [a, b, lambda] : {std::tuple{2.0, 1.0, 0.5}, {2.0, 1.0, 1.0}}) {
        const CausticProbe p = caustic_drift(ellipse21(), lambda, 0.3, 10000);
        INFO("lambda " << lambda << " drift " << p.max_deviation);
        CHECK(p.vertices.size() == 10001);
        CHECK(p.max_deviation < 1e-8 * l);
    }
    const CurveModel e31 = CurveModel::build(CurveSpec::ellipse(3.0, 1.0));
    const CausticProbe p = caustic_drift(e31, 2.0, 1.1, 10000);
    CHECK(p.max_deviation < 1e-8 * e31.length());

    const CausticProbe c = caustic_drift(unit_circle(), 1.0, 0.0, 10000);
    CHECK(c.gamma_a == doctest::Approx(std::sqrt(2.0)));
    CHECK(c.max_deviation < 1e-10 * unit_circle().length());
}

TEST_CASE("caustic probe rejects a start point off the candidate") {
    CHECK(kind_of([] { caustic_drift(ellipse21(), 3.0, 2.0, {3.0, 0.1}, 10); }) == ErrorKind::BadParams);
}

TEST_CASE("orthogonality of chord and tangent meeting point") {
    const CurveModel gamma = CurveModel::build(confocal_ellipse(2.0, 1.0, 1.0));
    const auto [A, B] = ellipse_axes(gamma.spec());
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ut(0.0, kTwoPi);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) worst = std::max(worst, orthogonality_check(ellipse21(), gamma, ellipse_point(A, B, ut(rng))));
    INFO("worst " << worst);
    CHECK(worst < 1e-9);
}
