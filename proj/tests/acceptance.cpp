// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include "olb/action.hpp"
#include "olb/billiard.hpp"
#include "olb/errors.hpp"
#include "olb/expansions.hpp"
#include "olb/generating.hpp"
#include "olb/io.hpp"
#include "olb/lazutkin.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace olb;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string sci(double v) {
    std::ostringstream s;
    s.precision(3);
    s << v;
    return s.str();
}

const CurveModel& circle() {
    static const CurveModel m = CurveModel::build(CurveSpec::circle(1.0));
    return m;
}
const CurveModel& ellipse() {
    static const CurveModel m = CurveModel::build(CurveSpec::ellipse(2.0, 1.0));
    return m;
}
const CurveModel& perturbed() {
    static const CurveModel m = CurveModel::build(CurveSpec::perturbed_circle(0.05, 3));
    return m;
}
const CurveModel& second_harmonic() {
    static const CurveModel m = CurveModel::build(CurveSpec::perturbed_circle(0.05, 2));
    return m;
}

const std::vector<int> kCircleLadder{8, 16, 32, 64, 128};

Outcome circle_beta() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (const OrbitConfig& o : minimize_all(circle(), kCircleLadder))
        worst = std::max(worst, rel(o.beta(), 2.0 * std::tan(kPi / o.q)));
    const double t = seconds_since(t0);
    return {worst < 1e-10 && t < 10.0, "max rel err " + sci(worst) + ", " + sci(t) + " s"};
}

Outcome circle_coefficients() {
    const BetaReport r = fit_coeffs(circle(), kCircleLadder);
    const double e1 = rel(r.fit.coeff(1), kTwoPi);
    const double e3 = rel(r.fit.coeff(3), 2.0 * std::pow(kPi, 3) / 3.0);
    const double e5 = rel(r.fit.coeff(5), 4.0 * std::pow(kPi, 5) / 15.0);
    return {e1 < 1e-8 && e3 < 1e-8 && e5 < 1e-5, "rel err b1 " + sci(e1) + ", b3 " + sci(e3) + ", b5 " + sci(e5)};
}

Outcome generic_coefficients() {
    const auto t0 = Clock::now();
    bool ok = true;
    std::string detail;
    for (auto [name, curve] : {std::pair{"perturbed", &perturbed()}, {"ellipse", &ellipse()}}) {
        const BetaReport r = fit_coeffs(*curve, doubling_ladder(16, 256));
        const double e3 = rel(r.fit.coeff(3), r.theoretical.b3);
        const double e5 = rel(r.fit.coeff(5), r.theoretical.b5);
        ok = ok && e3 < 1e-6 && e5 < 1e-3;
        detail += std::string(name) + ": b3 " + sci(e3) + ", b5 " + sci(e5) + "; ";
    }
    const double t = seconds_since(t0);
    return {ok && t < 120.0, detail + sci(t) + " s"};
}

Outcome even_coefficients() {
    const std::vector<int> ladder{32, 48, 64, 96, 128, 192, 256, 384, 512, 768, 1024};
    const std::vector<int> basis{1, 2, 3, 4, 5, 7, 9, 11};
    double worst = 0.0;
    for (const CurveModel* c : {&circle(), &ellipse(), &perturbed()}) {
        const FitResult f = fit_coeffs(*c, ladder, basis).fit;
        for (auto [even, odd] : {std::pair{2, 1}, {2, 3}, {4, 3}, {4, 5}})
            worst = std::max(worst, std::abs(f.coeff(even) / f.coeff(odd)));
    }
    return {worst < 1e-6, "max |even/odd neighbour| " + sci(worst)};
}

Outcome slope_pair(const std::function<SlopeReport(const CurveModel&)>& check, const CurveModel& a,
                   const CurveModel& b) {
    const SlopeReport ra = check(a), rb = check(b);
    return {ra.pass() && rb.pass(), "slopes " + sci(ra.slope) + ", " + sci(rb.slope)};
}

Outcome taylor_remainder_order() {
    return slope_pair([](const CurveModel& c) { return taylor_H_check(c); }, perturbed(), ellipse());
}

Outcome map_expansion_order() {
    Outcome o = slope_pair([](const CurveModel& c) { return map_expansion_check(c); }, perturbed(), ellipse());
    const CoefficientCheck a = map_A_check(perturbed());
    const CoefficientCheck b = map_A_check(ellipse());
    const double worst = std::max(a.max_relative_error, b.max_relative_error);
    o.pass = o.pass && a.s.size() == 10 && worst < 0.01;
    o.detail += "; A max rel err " + sci(worst);
    return o;
}

Outcome orbit_asymptotics() {
    const OrbitAsymptotics a = orbit_asymptotics_check(perturbed(), {32, 64, 128, 256});
    const bool ok = std::abs(a.position_slope + 2.0) <= 0.3 && std::abs(a.gap_slope + 3.0) <= 0.3;
    return {ok, "position slope " + sci(-a.position_slope) + ", gap slope " + sci(-a.gap_slope)};
}

Outcome lazutkin_normal_form() {
    Outcome o = slope_pair([](const CurveModel& c) { return lazutkin_check(c); }, perturbed(), second_harmonic());
    double worst = 0.0;
    for (int i = 0; i < 8; ++i)
        for (double y : {1e-3, 1e-2, 0.1, 0.3})
            worst = std::max(worst, std::abs(conjugated_step(circle(), {i / 8.0, y}).y - y));
    o.pass = o.pass && worst < 1e-12;
    o.detail += "; circle |y'-y| " + sci(worst);
    return o;
}

Outcome ellipse_caustics() {
    const CausticProbe p = caustic_drift(ellipse(), 1.0, 0.3, 10000);
    const double drift = p.max_deviation / ellipse().length();
    const CurveModel gamma = CurveModel::build(confocal_ellipse(2.0, 1.0, 1.0));
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ut(0.0, kTwoPi);
    double ortho = 0.0;
    for (int i = 0; i < 100; ++i)
        ortho = std::max(ortho, orthogonality_check(ellipse(), gamma, ellipse_point(p.gamma_a, p.gamma_b, ut(rng))));
    return {drift < 1e-8 && ortho < 1e-9, "drift/length " + sci(drift) + ", orthogonality " + sci(ortho)};
}

Outcome variational_consistency() {
    std::mt19937_64 rng(5);
    double worst_step = 0.0;
    for (const CurveModel* c : {&circle(), &ellipse(), &perturbed()}) {
        std::uniform_real_distribution<double> us(0.0, c->length());
        std::uniform_real_distribution<double> uf(0.02, 0.98);
        for (int i = 0; i < 100; ++i) {
            const double s0 = us(rng);
            const PhasePair p{s0, uf(rng) * (c->antipodal(s0) - s0)};
            worst_step = std::max(worst_step, std::abs(step(*c, p).s1() - step_variational(*c, p).s1()));
        }
    }
    double worst_res = 0.0;
    for (const CurveModel* c : {&ellipse(), &perturbed()}) {
        const OrbitTrace t = iterate(*c, {0.4, 0.3 * c->length() / 4.0}, 5000);
        for (double r : t.residuals)
            if (!std::isnan(r)) worst_res = std::max(worst_res, std::abs(r));
    }
    return {worst_step < 1e-10 && worst_res < 1e-9,
            "max |s2 diff| " + sci(worst_step) + ", max orbit residual " + sci(worst_res)};
}

Outcome twist() {
    double worst_rel = 0.0, max_h12 = -std::numeric_limits<double>::infinity();
    const int n = 12;
    for (const CurveModel* c : {&circle(), &ellipse(), &perturbed()}) {
        for (int i = 0; i < n; ++i) {
            const double s0 = c->length() * i / n;
            const double span = c->antipodal(s0) - s0;
            for (int j = 1; j <= n; ++j) {
                const double s1 = s0 + span * j / (n + 1.0);
                max_h12 = std::max(max_h12, eval_H_jet(*c, s0, s1).H12);
                // away from the diagonal: skip the smallest gap
                if (j > 1) worst_rel = std::max(worst_rel, twist_formula_check(*c, s0, s1, true));
            }
        }
    }
    return {max_h12 < 0.0 && worst_rel < 1e-6, "max H12 " + sci(max_h12) + ", formula rel err " + sci(worst_rel)};
}

Outcome mather() {
    bool ok = true;
    std::string detail;
    for (auto [name, c] : {std::pair{"circle", &circle()}, {"ellipse", &ellipse()}, {"perturbed", &perturbed()}}) {
        const double m = mather_scan(*c, 50).max;
        ok = ok && m < 0.0;
        detail += std::string(name) + " " + sci(m) + "; ";
    }
    double prev = -std::numeric_limits<double>::infinity();
    detail += "family";
    for (double cc : {0.5, 0.9, 0.99}) {
        // ρ = 1 − c·cos 3θ  ⇔  h = 1 + (c/8)·cos 3θ
        const CurveModel m = CurveModel::build(CurveSpec::fourier({{0, 1.0, 0.0}, {3, cc / 8.0, 0.0}}));
        const double v = mather_scan(m, 50).max;
        ok = ok && v < 0.0 && v > prev;
        prev = v;
        detail += " " + sci(v);
    }
    return {ok, detail};
}

Outcome defect_check() {
    double worst = 0.0;
    for (double r : {0.5, 1.0, 2.0})
        worst = std::max(worst, std::abs(isoperimetric_defect(CurveModel::build(CurveSpec::circle(r)))));
    const double d = isoperimetric_defect(ellipse());
    return {worst < 1e-10 && d < -1e-4, "circles max |D| " + sci(worst) + ", ellipse D " + sci(d)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"circle beta oracle", circle_beta},
        {"beta coefficients on the circle", circle_coefficients},
        {"beta coefficients on generic curves", generic_coefficients},
        {"even coefficients vanish", even_coefficients},
        {"generating function Taylor remainder", taylor_remainder_order},
        {"map expansion", map_expansion_order},
        {"orbit asymptotics", orbit_asymptotics},
        {"Lazutkin normal form", lazutkin_normal_form},
        {"ellipse integrability", ellipse_caustics},
        {"variational consistency", variational_consistency},
        {"twist", twist},
        {"Mather criterion scan", mather},
        {"isoperimetric defect", defect_check},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << ": " << o.detail
                  << std::endl;
    }
    std::cout << (criteria.size() - failed) << '/' << criteria.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
