#include "olb/generating.hpp"

#include "olb/billiard.hpp"
#include "olb/errors.hpp"
#include "olb/io.hpp"

#include <limits>
#include <ostream>

namespace olb {

namespace {

struct Wedge {
    Vec2 c;      // γ1 − γ0
    double D;    // γ0′ ∧ γ1′
    double N;    // (γ1 − γ0) ∧ (γ1′ − γ0′)
};

Wedge wedge_terms(const CurveModel& curve, double theta0, double delta) {
    Wedge w;
    w.c = chord_vector(curve, theta0, delta);
    w.D = std::sin(delta);
    // γ1′ − γ0′ = −2 sin(Δ/2) n(θ0 + Δ/2)
    const Vec2 dT = -2.0 * std::sin(0.5 * delta) * CurveModel::normal_at_angle(theta0 + 0.5 * delta);
    w.N = wedge(w.c, dT);
    return w;
}

// Richardson-extrapolated central difference of f at 0.
template <class F>
double richardson(F&& f, double h) {
    const double d1 = (f(h) - f(-h)) / (2.0 * h);
    const double d2 = (f(0.5 * h) - f(-0.5 * h)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

// H12 and H22 by differentiating the wedge H2 in s0 and s1.
std::pair<double, double> fd_second(const CurveModel& curve, double theta0, double delta) {
    const double theta1 = theta0 + delta;
    const double eps = curve.arc_between(theta0, theta1);
    const double room = curve.arc_between(theta1, theta0 + kPi);
    const double h = std::min(1e-5 * curve.length(), 0.05 * std::min(eps, room));
    auto h2_shift0 = [&](double sigma) {
        const double d = curve.angle_advance(theta0, sigma);
        return wedge_partials(curve, theta0 + d, delta - d).H2;
    };
    auto h2_shift1 = [&](double sigma) {
        const double d = curve.angle_advance(theta1, sigma);
        return wedge_partials(curve, theta0, delta + d).H2;
    };
    return {richardson(h2_shift0, h), richardson(h2_shift1, h)};
}

}  // namespace

std::pair<double, double> angles_of_pair(const CurveModel& curve, double s0, double s1) {
    const double eps = s1 - s0;
    if (!(eps > 0.0)) throw Error(ErrorKind::DegeneratePair, "pair needs s0 < s1");
    const double theta0 = curve.angle_at_arclength(s0);
    const double delta = curve.angle_advance(theta0, eps);
    if (!(delta < kPi - 1e-12))
        throw Error(ErrorKind::ParallelTangents, "pair is not in phase space: tangents are parallel or diverge");
    return {theta0, delta};
}

WedgePartials wedge_partials(const CurveModel& curve, double theta0, double delta) {
    const Wedge w = wedge_terms(curve, theta0, delta);
    const CurveJet j0 = curve.jet_at_angle(theta0, 2);
    const CurveJet j1 = curve.jet_at_angle(theta0 + delta, 2);
    const Vec2& T0 = j0.gamma[1];
    const Vec2& T1 = j1.gamma[1];
    const double D2 = w.D * w.D;
    WedgePartials p;
    p.H1 = -1.0 - wedge(w.c, j0.gamma[2]) / w.D - w.N * wedge(j0.gamma[2], T1) / D2;
    p.H2 = 1.0 + wedge(w.c, j1.gamma[2]) / w.D - w.N * wedge(T0, j1.gamma[2]) / D2;
    return p;
}

double closed_form_H11(const CurveModel& curve, double theta0, double delta) {
    const Wedge w = wedge_terms(curve, theta0, delta);
    const CurveJet j0 = curve.jet_at_angle(theta0, 3);
    const Vec2 T1 = CurveModel::tangent_at_angle(theta0 + delta);
    const Vec2& g1 = j0.gamma[1];
    const Vec2& g2 = j0.gamma[2];
    const Vec2& g3 = j0.gamma[3];
    const double D = w.D;
    const double X = wedge(w.c, g2);
    const double Y = wedge(g2, T1);
    const double Z = wedge(g3, T1);
    return wedge(g1, g2) / D - wedge(w.c, g3) / D + 2.0 * X * Y / (D * D) + Y / D - w.N * Z / (D * D) +
           2.0 * w.N * Y * Y / (D * D * D);
}

WedgePartials chord_partials(const CurveModel& curve, const Chord& c) {
    const double tau = c.tan_half();
    return {-1.0 - curve.curvature_at_angle(c.theta0) * c.t0() * tau,
            1.0 + curve.curvature_at_angle(c.theta1()) * c.t1() * tau};
}

HessianBlock chord_hessian(const CurveModel& curve, const Chord& c) {
    const double tau = c.tan_half();
    const double k0 = curve.curvature_at_angle(c.theta0);
    const double k1 = curve.curvature_at_angle(c.theta1());
    const double kap0 = curve.curvature_angle_derivative(c.theta0);
    const double kap1 = curve.curvature_angle_derivative(c.theta1());
    const double t0 = c.t0(), t1 = c.t1();
    HessianBlock b;
    b.H12 = -k0 * k1 * c.H() / c.one_plus_cos();
    b.H11 = k0 * (-kap0 * t0 * tau + tau + k0 * t0 * tau * tau);
    b.H22 = k1 * (kap1 * t1 * tau + tau + k1 * t1 * tau * tau);
    return b;
}

// ---------------------------------------------------------------------------

double eval_H(const CurveModel& curve, double s0, double s1) {
    const auto [theta0, delta] = angles_of_pair(curve, s0, s1);
    const Wedge w = wedge_terms(curve, theta0, delta);
    return w.N / w.D;
}

double eval_H_geometric(const CurveModel& curve, double s0, double s1) {
    const auto [theta0, delta] = angles_of_pair(curve, s0, s1);
    const Vec2 g0 = curve.point_at_angle(theta0), g1 = curve.point_at_angle(theta0 + delta);
    const Vec2 T0 = CurveModel::tangent_at_angle(theta0), T1 = CurveModel::tangent_at_angle(theta0 + delta);
    // g0 + t T0 = g1 + u T1, wedge with T1
    const double t = wedge(g1 - g0, T1) / wedge(T0, T1);
    const Vec2 P = g0 + t * T0;
    return (P - g0).norm() + (P - g1).norm();
}

HJet eval_H_jet(const CurveModel& curve, double s0, double s1) {
    const auto [theta0, delta] = angles_of_pair(curve, s0, s1);
    HJet j;
    const Wedge w = wedge_terms(curve, theta0, delta);
    j.H = w.N / w.D;
    const WedgePartials p = wedge_partials(curve, theta0, delta);
    j.H1 = p.H1;
    j.H2 = p.H2;
    j.H11 = closed_form_H11(curve, theta0, delta);
    const auto [h12, h22] = fd_second(curve, theta0, delta);
    j.H12 = h12;
    j.H22 = h22;
    return j;
}

double taylor_H(const CurveModel& curve, double s0, double delta) {
    if (delta == 0.0) return 0.0;
    const CurveJet j = curve.jet_at(s0, 1);
    const double k = j.k, k1 = j.dk, k2 = j.d2k;
    const double d2 = delta * delta, d3 = d2 * delta;
    return delta + k * k * d3 / 12.0 + k * k1 * d3 * delta / 12.0 +
           (2.0 * k * k * k * k + 4.0 * k1 * k1 + 7.0 * k * k2) * d3 * d2 / 240.0;
}

std::pair<double, double> taylor_remainder(const CurveModel& curve, double theta0, double delta_angle) {
    const Chord c = chord(curve, theta0, delta_angle);
    const CurveJet j = curve.jet_at_angle(theta0, 1);
    const double k = j.k, k1 = j.dk, k2 = j.d2k;
    const double d = c.arc, d3 = d * d * d;
    const double poly = k * k * d3 / 12.0 + k * k1 * d3 * d / 12.0 +
                        (2.0 * k * k * k * k + 4.0 * k1 * k1 + 7.0 * k * k2) * d3 * d * d / 240.0;
    return {d, c.excess - poly};
}

double mather_criterion(const CurveModel& curve, double s0, double s1) {
    const auto [theta0, delta] = angles_of_pair(curve, s0, s1);
    const Chord c = chord(curve, theta0, delta);
    const double theta1 = theta0 + delta;
    const double d12 = next_angle_step(curve, theta1, c.radius_at_end());
    const double h22 = fd_second(curve, theta0, delta).second;
    const double h11 = closed_form_H11(curve, theta1, d12);
    return -(h22 + h11);
}

MatherScan mather_scan(const CurveModel& curve, int n) {
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "Mather scan needs n >= 2");
    MatherScan scan;
    scan.n = n;
    scan.max = -std::numeric_limits<double>::infinity();
    const double l = curve.length();
    for (int i = 0; i < n; ++i) {
        const double s0 = l * i / n;
        const double span = curve.antipodal(s0) - s0;
        for (int j = 0; j < n; ++j) {
            const double eps = span * (j + 1) / (n + 1);
            const double m = mather_criterion(curve, s0, s0 + eps);
            scan.s0.push_back(s0);
            scan.eps.push_back(eps);
            scan.M.push_back(m);
            if (m > scan.max) {
                scan.max = m;
                scan.argmax_s0 = s0;
                scan.argmax_eps = eps;
            }
        }
    }
    return scan;
}

void MatherScan::write_csv(std::ostream& out) const {
    out << "s0,eps,M\n";
    for (std::size_t i = 0; i < M.size(); ++i) out << fmt(s0[i]) << ',' << fmt(eps[i]) << ',' << fmt(M[i]) << '\n';
}

double twist_formula_check(const CurveModel& curve, double s0, double s1, bool relative) {
    const auto [theta0, delta] = angles_of_pair(curve, s0, s1);
    const double h12 = fd_second(curve, theta0, delta).first;
    const double phi = kPi - delta;
    const double sh = std::sin(0.5 * phi);
    const Wedge w = wedge_terms(curve, theta0, delta);
    const double formula = -curve.curvature_at_angle(theta0) * curve.curvature_at_angle(theta0 + delta) * (w.N / w.D) /
                           (2.0 * sh * sh);
    const double r = std::abs(h12 - formula);
    return relative ? r / std::abs(h12) : r;
}

}  // namespace olb
