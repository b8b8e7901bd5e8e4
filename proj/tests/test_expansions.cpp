#include "doctest.h"

#include "olb/expansions.hpp"

using namespace olb;

namespace {

const CurveModel& perturbed() {
    static const CurveModel m = CurveModel::build(CurveSpec::perturbed_circle(0.05));
    return m;
}
const CurveModel& ellipse21() {
    static const CurveModel m = CurveModel::build(CurveSpec::ellipse(2.0, 1.0));
    return m;
}

}  // namespace

TEST_CASE("map coefficients vanish on the circle") {
    const CurveModel c = CurveModel::build(CurveSpec::circle(1.0));
    for (double th : {0.0, 1.0, 4.0}) {
        const MapCoeffs m = map_expansion_coeffs(c, th);
        CHECK(std::abs(m.A) < 1e-12);
        CHECK(std::abs(m.B) < 1e-12);
        CHECK(std::abs(m.C) < 1e-12);
        const auto [e0, e1] = map_eps_step(c, th, 0.3);
        CHECK(e1 == doctest::Approx(e0).epsilon(1e-13));
    }
}

TEST_CASE("map coefficients against the jet") {
    // ellipse vertex: k′ = 0 so A = 0 and B = −2k″/(3k)
    const MapCoeffs m = map_expansion_coeffs(ellipse21(), 0.0);
    const CurveJet j = ellipse21().jet_at_angle(0.0, 1);
    CHECK(std::abs(m.A) < 1e-12);
    CHECK(m.B == doctest::Approx(-2.0 * j.d2k / (3.0 * j.k)).epsilon(1e-12));
}

TEST_CASE("generating function Taylor remainder is O(delta^6)") {
    for (const CurveModel* m : {&perturbed(), &ellipse21()}) {
        const SlopeReport r = taylor_H_check(*m);
        INFO("slope " << r.slope);
        CHECK(r.pass());
    }
}

TEST_CASE("map expansion remainder is O(eps^5)") {
    for (const CurveModel* m : {&perturbed(), &ellipse21()}) {
        const SlopeReport r = map_expansion_check(*m);
        INFO("slope " << r.slope);
        CHECK(r.pass());
    }
}

TEST_CASE("first map coefficient extracted from the dynamics") {
    for (const CurveModel* m : {&perturbed(), &ellipse21()}) {
        const CoefficientCheck c = map_A_check(*m);
        CHECK(c.s.size() == 10);
        INFO("max relative error " << c.max_relative_error);
        CHECK(c.max_relative_error < 0.01);
    }
}

TEST_CASE("slope report") {
    SlopeReport r;
    r.slope = 4.25;
    r.expected = 4.0;
    r.tolerance = 0.3;
    CHECK(r.pass());
    r.slope = 3.6;
    CHECK_FALSE(r.pass());
    CHECK(sample_angles(4, 0.0)[2] == doctest::Approx(kPi));
}
