#include "olb/chord.hpp"

namespace olb {

namespace {

// Composite Gauss-Legendre on the local variable u ∈ [0, Δ]. The callback gets
// u and v = Δ − u, both computed without subtracting nearby absolute angles.
template <class F>
void local_quadrature(const CurveModel& curve, double theta0, double delta, F&& f) {
    const GaussRule& rule = gauss_legendre<CurveModel::kGaussNodes>();
    double a = 0.0;
    for (;;) {
        double len = curve.panel_length(theta0 + a);
        len = std::min(len, curve.panel_length(theta0 + a + len));
        const bool last = len >= delta - a;
        if (last) len = delta - a;
        const double half = 0.5 * len;
        const double rest = last ? 0.0 : delta - a - len;
        for (int i = 0; i < CurveModel::kGaussNodes; ++i) {
            const double x = rule.nodes[i];
            const double u = a + half * (1.0 + x);
            const double v = rest + half * (1.0 - x);
            f(rule.weights[i] * half, u, v, curve.rho(theta0 + u));
        }
        if (last) break;
        a += len;
    }
}

}  // namespace

Chord chord(const CurveModel& curve, double theta0, double delta) {
    Chord c;
    c.theta0 = theta0;
    c.delta = delta;
    if (!(delta > 0.0)) return c;
    double lead = 0, trail = 0, arc = 0, ex = 0;
    local_quadrature(curve, theta0, delta, [&](double w, double u, double v, double r) {
        const double wr = w * r;
        lead += wr * std::sin(v);
        trail += wr * std::sin(u);
        arc += wr;
        ex += wr * std::sin(0.5 * v) * std::sin(0.5 * u);
    });
    c.lead = lead;
    c.trail = trail;
    c.arc = arc;
    c.excess = 2.0 * ex / std::cos(0.5 * delta);
    return c;
}

double chord_lead(const CurveModel& curve, double theta0, double delta) {
    double lead = 0;
    local_quadrature(curve, theta0, delta,
                     [&](double w, double, double v, double r) { lead += w * r * std::sin(v); });
    return lead;
}

Vec2 chord_vector(const CurveModel& curve, double theta0, double delta) {
    // T(θ0 + u) = cos u·T0 + sin u·JT0
    double c = 0, s = 0;
    local_quadrature(curve, theta0, delta, [&](double w, double u, double, double r) {
        c += w * r * std::cos(u);
        s += w * r * std::sin(u);
    });
    const Vec2 t0 = CurveModel::tangent_at_angle(theta0);
    return c * t0 + s * rot90(t0);
}

}  // namespace olb
