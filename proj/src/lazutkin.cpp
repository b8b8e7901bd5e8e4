#include "olb/lazutkin.hpp"

#include "olb/errors.hpp"
#include "olb/io.hpp"

#include <limits>
#include <ostream>

namespace olb {

double lazutkin_x(const CurveModel& curve, double s) {
    return curve.lazutkin_at_angle(curve.angle_at_arclength(s));
}

double lazutkin_inverse(const CurveModel& curve, double x) {
    return curve.arclength_at_angle(curve.angle_at_lazutkin(x));
}

LazutkinPoint conjugated_step(const CurveModel& curve, LazutkinPoint p, const BilliardOptions& opts) {
    if (!(p.y > 0.0)) throw Error(ErrorKind::DegeneratePair, "Lazutkin width must be positive");
    const double theta0 = curve.angle_at_lazutkin(p.x);
    const double d01 = curve.lazutkin_advance(theta0, p.y);
    if (!(d01 < kPi - 1e-12)) throw Error(ErrorKind::ParallelTangents, "Lazutkin width leaves phase space");
    if (!(curve.arc_between(theta0, theta0 + d01) >= opts.delta_min * curve.length()))
        throw Error(ErrorKind::DegeneratePair, "eps below delta_min");
    const Chord c = chord(curve, theta0, d01);
    const double theta1 = theta0 + d01;
    const double d12 = next_angle_step(curve, theta1, c.radius_at_end(), opts);
    return {p.x + p.y, curve.lazutkin_between(theta1, theta1 + d12)};
}

CurveSpec confocal_ellipse(double a, double b, double lambda) {
    if (!(a >= b && b > 0.0) || !(lambda > 0.0) || !std::isfinite(a) || !std::isfinite(lambda))
        throw Error(ErrorKind::BadParams, "confocal ellipse needs a >= b > 0 and lambda > 0");
    return CurveSpec::ellipse(std::sqrt(a * a + lambda), std::sqrt(b * b + lambda));
}

std::pair<double, double> ellipse_axes(const CurveSpec& spec) {
    switch (spec.kind) {
        case CurveKind::circle: return {spec.radius, spec.radius};
        case CurveKind::ellipse: return {spec.a, spec.b};
        default: throw Error(ErrorKind::BadParams, "curve is not an ellipse");
    }
}

Vec2 ellipse_point(double A, double B, double t) { return {A * std::cos(t), B * std::sin(t)}; }

double ellipse_support_residual(double A, double B, const Vec2& P) {
    const double th = std::atan2(P.y() / (B * B), P.x() / (A * A));
    const double c = std::cos(th), s = std::sin(th);
    return P.x() * c + P.y() * s - std::sqrt(A * A * c * c + B * B * s * s);
}

CausticProbe caustic_drift(const CurveModel& inner, double A, double B, const Vec2& P0, int n,
                           const BilliardOptions& opts) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "caustic probe needs n >= 1");
    if (!(A > 0.0 && B > 0.0)) throw Error(ErrorKind::BadParams, "caustic semi-axes must be positive");
    const double on = P0.x() * P0.x() / (A * A) + P0.y() * P0.y() / (B * B) - 1.0;
    if (!(std::abs(on) <= 1e-12)) throw Error(ErrorKind::BadParams, "start point is not on the caustic candidate");

    CausticProbe probe;
    probe.gamma_a = A;
    probe.gamma_b = B;
    probe.lambda = std::numeric_limits<double>::quiet_NaN();
    probe.steps = n;
    const PhasePair start = pair_from_exterior_point(inner, P0);
    const OrbitTrace trace = iterate(inner, start, n, opts);
    probe.vertices = trace.vertices;
    probe.deviations.reserve(trace.vertices.size());
    for (const Vec2& P : trace.vertices) {
        const double d = std::abs(ellipse_support_residual(A, B, P));
        probe.deviations.push_back(d);
        probe.max_deviation = std::max(probe.max_deviation, d);
    }
    return probe;
}

CausticProbe caustic_drift(const CurveModel& inner, double lambda, double start_angle, int n,
                           const BilliardOptions& opts) {
    const auto [a, b] = ellipse_axes(inner.spec());
    const CurveSpec g = confocal_ellipse(a, b, lambda);
    CausticProbe probe = caustic_drift(inner, g.a, g.b, ellipse_point(g.a, g.b, start_angle), n, opts);
    probe.a = a;
    probe.b = b;
    probe.lambda = lambda;
    return probe;
}

void CausticProbe::write_csv(std::ostream& out) const {
    out << "step,Px,Py,deviation\n";
    for (std::size_t i = 0; i < vertices.size(); ++i)
        out << i << ',' << fmt(vertices[i].x()) << ',' << fmt(vertices[i].y()) << ',' << fmt(deviations[i]) << '\n';
}

double orthogonality_check(const CurveModel& inner, const CurveModel& gamma, const Vec2& P0) {
    const auto [A, B] = ellipse_axes(gamma.spec());
    const PhasePair pair = pair_from_exterior_point(inner, P0);
    const double theta1 = inner.angle_at_arclength(pair.s1());
    const Vec2 Q = inner.point_at_angle(theta1);
    const Vec2 T = CurveModel::tangent_at_angle(theta1);
    // P0 + μT on Γ: μ = −2 P0ᵀMT / TᵀMT with M = diag(1/A², 1/B²)
    const double ia = 1.0 / (A * A), ib = 1.0 / (B * B);
    const double pmt = P0.x() * T.x() * ia + P0.y() * T.y() * ib;
    const double tmt = T.x() * T.x() * ia + T.y() * T.y() * ib;
    const double mu = -2.0 * pmt / tmt;
    if (!(mu > 0.0)) throw Error(ErrorKind::DegenerateGeometry, "tangent chord does not meet the outer curve ahead");
    const Vec2 P1 = P0 + mu * T;
    // tangents to Γ at P0, P1: Xᵀ M P = 1
    const Vec2 m0{P0.x() * ia, P0.y() * ib}, m1{P1.x() * ia, P1.y() * ib};
    const double det = m0.x() * m1.y() - m0.y() * m1.x();
    if (!(std::abs(det) > 1e-300)) throw Error(ErrorKind::DegenerateGeometry, "tangents to the outer curve are parallel");
    const Vec2 R{(m1.y() - m0.y()) / det, (m0.x() - m1.x()) / det};
    const Vec2 chordv = P1 - P0, qr = Q - R;
    const double denom = chordv.norm() * qr.norm();
    if (!(denom > 0.0)) throw Error(ErrorKind::DegenerateGeometry, "degenerate orthogonality configuration");
    return std::abs(chordv.dot(qr)) / denom;
}

}  // namespace olb
