#include "doctest.h"

#include "olb/action.hpp"
#include "olb/generating.hpp"

#include <random>
#include <sstream>

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

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::InvalidArgument;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("circle orbits are regular circumscribed polygons") {
    for (int q : {3, 4, 5, 8, 17, 64, 128}) {
        const OrbitConfig o = minimize_orbit(unit_circle(), q);
        CHECK(rel(o.beta(), 2.0 * std::tan(kPi / q)) < 1e-12);
        CHECK(o.residual <= 1e-12 * unit_circle().length());
        CHECK(o.hessian_psd);
    }
    // from a distorted start
    std::vector<double> s{0.0, 1.0, 2.5, 3.0, 5.0};
    const OrbitConfig o = minimize_orbit(unit_circle(), 5, configuration_from_arclengths(unit_circle(), s));
    CHECK(rel(o.beta(), 2.0 * std::tan(kPi / 5)) < 1e-12);
    CHECK(o.iterations > 0);
}

TEST_CASE("orbits satisfy the variational law") {
    const OrbitConfig o = minimize_orbit(perturbed(), 7);
    const double l = perturbed().length();
    for (int i = 0; i < o.q; ++i) {
        const double prev = i > 0 ? o.s[i - 1] : o.s[o.q - 1] - l;
        const double next = i + 1 < o.q ? o.s[i + 1] : o.s[0] + l;
        const double g = eval_H_jet(perturbed(), prev, o.s[i]).H2 + eval_H_jet(perturbed(), o.s[i], next).H1;
        CHECK(std::abs(g) < 1e-10);
    }
    for (int i = 0; i + 1 < o.q; ++i) CHECK(o.s[i] < o.s[i + 1]);
    CHECK(o.s.back() < o.s[0] + l);
    CHECK(o.hessian_psd);
}

TEST_CASE("action equals the polygon perimeter") {
    for (const CurveModel* m : {&ellipse21(), &perturbed()})
        for (int q : {3, 6, 25}) {
            const OrbitConfig o = minimize_orbit(*m, q);
            const auto P = orbit_vertices(*m, o);
            double per = 0.0;
            for (int i = 0; i < q; ++i) per += (P[(i + 1) % q] - P[i]).norm();
            CHECK(rel(per / q, o.beta()) < 1e-10);
            CHECK(o.excess == doctest::Approx(o.action - m->length()).epsilon(1e-9));
        }
}

TEST_CASE("ellipse orbits form a rotation-invariant family") {
    const double b0 = minimize_orbit(ellipse21(), 3).beta();
    for (double x0 : {0.05, 0.13, 0.3}) {
        const OrbitConfig o = minimize_orbit(ellipse21(), 3, lazutkin_configuration(ellipse21(), 3, x0));
        CHECK(rel(o.beta(), b0) < 1e-12);
    }
}

TEST_CASE("minimum does not depend on the starting configuration") {
    const double b0 = beta_of(perturbed(), 11);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> noise(-0.01, 0.01);
    for (int trial = 0; trial < 5; ++trial) {
        OrbitConfig init = lazutkin_configuration(perturbed(), 11, 0.07 * trial);
        for (double& t : init.theta) t += noise(rng);
        const OrbitConfig o = minimize_orbit(perturbed(), 11, init);
        CHECK(rel(o.beta(), b0) < 1e-12);
    }
    // minimality against the equidistributed polygon
    const OrbitConfig start = lazutkin_configuration(perturbed(), 11, 0.2);
    double per = 0.0;
    const auto P = orbit_vertices(perturbed(), start);
    for (int i = 0; i < 11; ++i) per += (P[(i + 1) % 11] - P[i]).norm();
    CHECK(b0 <= per / 11);
}

TEST_CASE("bad orbit requests") {
    CHECK(kind_of([] { minimize_orbit(unit_circle(), 2); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] {
              minimize_orbit(unit_circle(), 3, configuration_from_arclengths(unit_circle(), {0.0, 0.2, 0.4}));
          }) == ErrorKind::MonotonicityLoss);
    CHECK(kind_of([] {
              minimize_orbit(unit_circle(), 4, configuration_from_arclengths(unit_circle(), {0.0, 2.0, 4.0}));
          }) == ErrorKind::InvalidArgument);
    MinimizeOptions tight;
    tight.max_iterations = 0;
    CHECK(kind_of([&] {
              minimize_orbit(perturbed(), 9, configuration_from_arclengths(perturbed(), {0, 0.5, 1, 1.7, 2.2, 3, 3.5, 4, 5}),
                             tight);
          }) == ErrorKind::NoConvergence);
}

TEST_CASE("closed-form coefficients") {
    const TheoreticalCoeffs c = theoretical_coeffs(unit_circle());
    CHECK(rel(c.b1, kTwoPi) < 1e-14);
    CHECK(rel(c.b3, 2.0 * std::pow(kPi, 3) / 3.0) < 1e-13);
    CHECK(rel(c.b5, 4.0 * std::pow(kPi, 5) / 15.0) < 1e-13);
    // β(1/q) scales linearly with the curve
    const CurveModel r2 = CurveModel::build(CurveSpec::circle(2.0));
    const TheoreticalCoeffs c2 = theoretical_coeffs(r2);
    CHECK(rel(c2.b3, 2.0 * c.b3) < 1e-13);
    CHECK(rel(c2.b5, 2.0 * c.b5) < 1e-13);
    // invariance under rotation of the curve
    const CurveModel rot = CurveModel::build(CurveSpec::perturbed_circle(0.05).rotated(0.4));
    CHECK(rel(theoretical_coeffs(rot).b5, theoretical_coeffs(perturbed()).b5) < 1e-12);
}

TEST_CASE("isoperimetric defect") {
    for (double r : {0.5, 1.0, 2.0}) {
        const CurveModel c = CurveModel::build(CurveSpec::circle(r));
        CHECK(std::abs(isoperimetric_defect(c)) < 1e-10);
    }
    CHECK(isoperimetric_defect(ellipse21()) < -1e-4);
    CHECK(isoperimetric_defect(perturbed()) < 0.0);
}

TEST_CASE("least squares fit") {
    std::vector<int> q{10, 20, 40, 80, 160};
    std::vector<double> b;
    for (int n : q) b.push_back(3.0 / n + 2.0 / std::pow(n, 3) - 5.0 / std::pow(n, 5));
    const FitResult f = fit_beta(q, b, {1, 3, 5});
    CHECK(f.coeff(1) == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(f.coeff(3) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(f.coeff(5) == doctest::Approx(-5.0).epsilon(1e-7));
    CHECK(kind_of([&] { f.coeff(7); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([&] { fit_beta({10, 20}, {1.0, 2.0}, {1, 3, 5}); }) == ErrorKind::IllConditionedFit);
    CHECK(kind_of([&] { fit_beta(q, b, {1, 3, 5}, 5.0, 10.0); }) == ErrorKind::IllConditionedFit);
}

TEST_CASE("ladders") {
    CHECK(doubling_ladder(8, 128) == std::vector<int>{8, 16, 32, 64, 128});
    CHECK(doubling_ladder(8, 100) == std::vector<int>{8, 16, 32, 64});
    CHECK(kind_of([] { doubling_ladder(2, 8); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { fit_coeffs(unit_circle(), {8, 16, 32}); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { fit_coeffs(unit_circle(), {8, 10, 12, 16}); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("coefficient fit on the circle") {
    const BetaReport r = fit_coeffs(unit_circle(), doubling_ladder(8, 128));
    CHECK(rel(r.fit.coeff(1), kTwoPi) < 1e-10);
    CHECK(rel(r.fit.coeff(3), 2.0 * std::pow(kPi, 3) / 3.0) < 1e-8);
    CHECK(rel(r.fit.coeff(5), 4.0 * std::pow(kPi, 5) / 15.0) < 1e-5);
    for (std::size_t i = 0; i < r.q.size(); ++i) CHECK(rel(r.beta[i], 2.0 * std::tan(kPi / r.q[i])) < 1e-12);

    const nlohmann::json j = r.to_json();
    CHECK(j["orbits"].size() == 5);
    CHECK(j["relative_error"]["b3"].get<double>() < 1e-8);
    std::ostringstream csv;
    r.write_csv(csv);
    CHECK(csv.str().rfind("q,beta,beta_minus_length_over_q,iterations\n", 0) == 0);
}

TEST_CASE("orbit asymptotics on a generic curve") {
    const OrbitAsymptotics a = orbit_asymptotics_check(perturbed(), {32, 64, 128, 256});
    INFO("slopes " << a.position_slope << ' ' << a.gap_slope);
    CHECK(std::abs(a.position_slope + 2.0) < 0.3);
    CHECK(std::abs(a.gap_slope + 3.0) < 0.3);
    CHECK(a.to_json()["rows"].size() == 4);
}
