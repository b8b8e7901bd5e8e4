#include "olb/expansions.hpp"

#include "olb/billiard.hpp"
#include "olb/chord.hpp"
#include "olb/generating.hpp"
#include "olb/lazutkin.hpp"

namespace olb {

namespace {

std::vector<double> levels_between(double lo, double hi, int n) { return geomspace(lo, hi, n); }

SlopeReport finish(SlopeReport r) {
    r.slope = loglog_slope(r.x, r.y);
    return r;
}

}  // namespace

std::vector<double> sample_angles(int n, double offset) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = offset + kTwoPi * i / n;
    return out;
}

MapCoeffs map_expansion_coeffs(const CurveModel& curve, double theta) {
    const CurveJet j = curve.jet_at_angle(theta, 1);
    const double k = j.k, k1 = j.dk, k2 = j.d2k, k3 = j.d3k;
    MapCoeffs c;
    c.A = -2.0 * k1 / (3.0 * k);
    c.B = 10.0 * k1 * k1 / (9.0 * k * k) - 2.0 * k2 / (3.0 * k);
    c.C = (-24.0 * k * k * k * k * k1 - 1160.0 * k1 * k1 * k1 + 1200.0 * k * k1 * k2 - 216.0 * k * k * k3) /
          (540.0 * k * k * k);
    return c;
}

std::pair<double, double> map_eps_step(const CurveModel& curve, double theta0, double eps0) {
    const double d01 = curve.angle_advance(theta0, eps0);
    const Chord c = chord(curve, theta0, d01);
    const double theta1 = theta0 + d01;
    const double d12 = next_angle_step(curve, theta1, c.radius_at_end());
    return {c.arc, curve.arc_between(theta1, theta1 + d12)};
}

SlopeReport taylor_H_check(const CurveModel& curve, int base_points, int levels) {
    SlopeReport r;
    r.name = "H";
    r.expected = 6.0;
    r.tolerance = 0.2;
    const auto base = sample_angles(base_points);
    for (double d : levels_between(1e-3, 1e-1, levels)) {
        double worst = 0.0;
        for (double th : base) {
            const auto [delta, rem] = taylor_remainder(curve, th, curve.angle_advance(th, d));
            worst = std::max(worst, std::abs(rem));
        }
        r.x.push_back(d);
        r.y.push_back(worst);
    }
    return finish(r);
}

SlopeReport map_expansion_check(const CurveModel& curve, int base_points, int levels) {
    SlopeReport r;
    r.name = "map";
    r.expected = 5.0;
    r.tolerance = 0.2;
    const auto base = sample_angles(base_points);
    for (double e : levels_between(1e-3, 1e-1, levels)) {
        double worst = 0.0;
        for (double th : base) {
            const auto [e0, e1] = map_eps_step(curve, th, e);
            const MapCoeffs c = map_expansion_coeffs(curve, th);
            // subtract in increasing size so the O(ε⁵) remainder survives rounding
            const double rem = (e1 - e0) - e0 * e0 * (c.A + e0 * (c.B + e0 * c.C));
            worst = std::max(worst, std::abs(rem));
        }
        r.x.push_back(e);
        r.y.push_back(worst);
    }
    return finish(r);
}

SlopeReport lazutkin_check(const CurveModel& curve, int base_points, int levels) {
    SlopeReport r;
    r.name = "lazutkin";
    r.expected = 4.0;
    r.tolerance = 0.3;
    std::vector<double> base(base_points);
    for (int i = 0; i < base_points; ++i) base[i] = (i + 0.25) / base_points;
    for (double y : levels_between(1e-3, 5e-2, levels)) {
        double worst = 0.0;
        for (double x : base) {
            const LazutkinPoint out = conjugated_step(curve, {x, y});
            worst = std::max(worst, std::abs(out.y - y));
        }
        r.x.push_back(y);
        r.y.push_back(worst);
    }
    return finish(r);
}

CoefficientCheck map_A_check(const CurveModel& curve, int n) {
    // candidate base points on a fine grid, keep those where |A| is not small
    constexpr int grid = 720;
    double amax = 0.0;
    std::vector<double> avals(grid);
    for (int i = 0; i < grid; ++i) {
        avals[i] = map_expansion_coeffs(curve, kTwoPi * i / grid).A;
        amax = std::max(amax, std::abs(avals[i]));
    }
    CoefficientCheck out;
    const double h = 1e-3;
    for (int m = 0; m < n; ++m) {
        int i = static_cast<int>(std::lround((m + 0.5) * grid / n)) % grid;
        for (int step = 0; step < grid && std::abs(avals[i]) < 0.3 * amax; ++step) i = (i + 1) % grid;
        const double th = kTwoPi * i / grid;
        auto quotient = [&](double e) {
            const auto [e0, e1] = map_eps_step(curve, th, e);
            return (e1 - e0) / (e0 * e0);
        };
        const double extracted = 2.0 * quotient(0.5 * h) - quotient(h);
        const double predicted = avals[i];
        out.s.push_back(curve.arclength_at_angle(th));
        out.extracted.push_back(extracted);
        out.predicted.push_back(predicted);
        if (predicted != 0.0)
            out.max_relative_error = std::max(out.max_relative_error, std::abs(extracted - predicted) / std::abs(predicted));
        else
            out.max_relative_error = std::max(out.max_relative_error, std::abs(extracted));
    }
    return out;
}

}  // namespace olb
