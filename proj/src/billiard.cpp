#include "olb/billiard.hpp"

#include "olb/errors.hpp"
#include "olb/generating.hpp"
#include "olb/io.hpp"

#include <limits>
#include <ostream>

namespace olb {

namespace {

constexpr double kParallelTol = 1e-12;

struct Bracket {
    double lo, hi;
};

// Angular guards equivalent to δ_min in arclength next to θ and next to θ + π.
Bracket admissible(const CurveModel& curve, double theta, const BilliardOptions& opts) {
    const double dmin = opts.delta_min * curve.length();
    return {dmin * curve.curvature_at_angle(theta), kPi - dmin * curve.curvature_at_angle(theta + kPi)};
}

// Expands from `guess` until f changes sign inside [lo, hi], then runs Brent.
template <class F>
double solve_increasing(F&& f, double guess, Bracket br, double xtol, const char* what) {
    const double flo = f(br.lo);
    const double fhi = f(br.hi);
    if (!(flo < 0.0) || !(fhi > 0.0))
        throw Error(ErrorKind::RootBracketFailure, std::string(what) + ": no sign change on the admissible interval");
    double x = std::clamp(guess, br.lo, br.hi);
    double fx = f(x);
    double a = br.lo, fa = flo, b = br.hi, fb = fhi;
    if (fx == 0.0) return x;
    if (fx < 0.0) {
        a = x;
        fa = fx;
        for (int i = 0; i < 60; ++i) {
            const double y = std::min(1.25 * x, 0.5 * (x + br.hi));
            if (y >= br.hi) break;
            const double fy = f(y);
            if (fy >= 0.0) {
                b = y;
                fb = fy;
                break;
            }
            x = y;
            a = y;
            fa = fy;
        }
    } else {
        b = x;
        fb = fx;
        for (int i = 0; i < 200; ++i) {
            const double y = std::max(0.8 * x, br.lo);
            if (y <= br.lo) break;
            const double fy = f(y);
            if (fy <= 0.0) {
                a = y;
                fa = fy;
                break;
            }
            x = y;
            b = y;
            fb = fy;
        }
    }
    const RootResult r = bracketed_root(f, a, b, fa, fb, xtol);
    if (!r.converged) throw Error(ErrorKind::RootBracketFailure, std::string(what) + ": root solver did not converge");
    return r.root;
}

void check_angle_pair(double delta) {
    if (!(delta < kPi - kParallelTol))
        throw Error(ErrorKind::ParallelTangents, "pair is not in phase space: tangents are parallel or diverge");
}

}  // namespace

// ---------------------------------------------------------------------------

AnglePoint AnglePoint::normalise(double reduced, long turns) {
    const double q = std::floor(reduced / kTwoPi);
    AnglePoint p;
    p.reduced = reduced - q * kTwoPi;
    p.turns = turns + static_cast<long>(q);
    if (p.reduced >= kTwoPi) {
        p.reduced -= kTwoPi;
        ++p.turns;
    }
    return p;
}

AnglePoint AnglePoint::from_lifted(double theta) { return normalise(theta, 0); }

double AnglePoint::arclength(const CurveModel& curve) const {
    return curve.arclength_at_angle(reduced) + curve.length() * static_cast<double>(turns);
}

double next_angle_step(const CurveModel& curve, double theta1, double radius, const BilliardOptions& opts) {
    const Bracket br = admissible(curve, theta1, opts);
    // small-arc asymptotics: ℛ ≈ ρΔ²/4
    const double guess = 2.0 * std::sqrt(radius / curve.rho(theta1));
    auto g = [&](double d) {
        const double c = std::cos(0.5 * d);
        return chord_lead(curve, theta1, d) - radius * 2.0 * c * c;
    };
    return solve_increasing(g, guess, br, opts.tol_root, "step");
}

double next_angle_step_variational(const CurveModel& curve, double theta0, double delta01,
                                   const BilliardOptions& opts) {
    const double theta1 = theta0 + delta01;
    const double h2 = wedge_partials(curve, theta0, delta01).H2;
    const Bracket br = admissible(curve, theta1, opts);
    // H1(θ1, ·) decreases from −1, so −(H2 + H1) is increasing
    auto phi = [&](double d) { return -(h2 + wedge_partials(curve, theta1, d).H1); };
    return solve_increasing(phi, delta01, br, opts.tol_root, "step_variational");
}

// ---------------------------------------------------------------------------

Vec2 tangent_intersection(const CurveModel& curve, double s0, double s1) {
    const auto [theta0, delta] = angles_of_pair(curve, s0, s1);
    const Chord c = chord(curve, theta0, delta);
    return curve.point_at_angle(theta0) + c.t0() * CurveModel::tangent_at_angle(theta0);
}

double tangent_circle_radius(const CurveModel& curve, double s0, double s1) {
    const auto [theta0, delta] = angles_of_pair(curve, s0, s1);
    return chord(curve, theta0, delta).radius_at_end();
}

double exchanged_radius_ratio(const CurveModel& curve, double s0, double s1) {
    const auto [theta0, delta] = angles_of_pair(curve, s0, s1);
    return chord(curve, theta0, delta).radius_at_start();
}

namespace {

struct AngleStep {
    double theta0, delta01, delta12;
};

AngleStep prepare(const CurveModel& curve, const PhasePair& pair, const BilliardOptions& opts) {
    if (!(pair.eps >= opts.delta_min * curve.length()))
        throw Error(ErrorKind::DegeneratePair, "eps below delta_min");
    const double theta0 = curve.angle_at_arclength(pair.s0);
    const double delta = curve.angle_advance(theta0, pair.eps);
    check_angle_pair(delta);
    return {theta0, delta, 0.0};
}

}  // namespace

PhasePair step(const CurveModel& curve, const PhasePair& pair, const BilliardOptions& opts) {
    AngleStep a = prepare(curve, pair, opts);
    const Chord c = chord(curve, a.theta0, a.delta01);
    const double theta1 = a.theta0 + a.delta01;
    const double d12 = next_angle_step(curve, theta1, c.radius_at_end(), opts);
    return {pair.s1(), curve.arc_between(theta1, theta1 + d12)};
}

PhasePair step_variational(const CurveModel& curve, const PhasePair& pair, const BilliardOptions& opts) {
    AngleStep a = prepare(curve, pair, opts);
    const double theta1 = a.theta0 + a.delta01;
    const double d12 = next_angle_step_variational(curve, a.theta0, a.delta01, opts);
    return {pair.s1(), curve.arc_between(theta1, theta1 + d12)};
}

double variational_residual(const CurveModel& curve, double s0, double s1, double s2) {
    const auto [theta0, d01] = angles_of_pair(curve, s0, s1);
    const double theta1 = theta0 + d01;
    const double d12 = curve.angle_advance(theta1, s2 - s1);
    check_angle_pair(d12);
    return wedge_partials(curve, theta0, d01).H2 + wedge_partials(curve, theta1, d12).H1;
}

// ---------------------------------------------------------------------------

OrbitTrace iterate(const CurveModel& curve, const PhasePair& start, int n, const BilliardOptions& opts) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "iterate needs n >= 1");
    AngleStep a = prepare(curve, start, opts);
    AnglePoint p0 = AnglePoint::from_lifted(a.theta0);
    double delta = a.delta01;

    OrbitTrace trace;
    trace.pairs.reserve(n + 1);
    trace.vertices.reserve(n + 1);
    trace.residuals.reserve(n + 1);
    trace.pairs.push_back(start);

    for (int i = 0; i < n; ++i) {
        const double theta0 = p0.reduced;
        const Chord c = chord(curve, theta0, delta);
        trace.vertices.push_back(curve.point_at_angle(theta0) + c.t0() * CurveModel::tangent_at_angle(theta0));
        const double theta1 = theta0 + delta;
        double d12;
        try {
            d12 = next_angle_step(curve, theta1, c.radius_at_end(), opts);
        } catch (const Error& e) {
            throw Error(e.kind(), std::string(e.what()) + " at step " + std::to_string(i));
        }
        const double res = wedge_partials(curve, theta0, delta).H2 + wedge_partials(curve, theta1, d12).H1;
        if (!(std::abs(res) <= opts.tol_residual))
            throw Error(ErrorKind::ConsistencyError,
                        "variational residual " + fmt(res) + " exceeds tolerance at step " + std::to_string(i));
        trace.residuals.push_back(res);
        const PhasePair& prev = trace.pairs.back();
        trace.pairs.push_back({prev.s1(), curve.arc_between(theta1, theta1 + d12)});
        p0 = p0.advanced(delta);
        delta = d12;
    }
    {
        const double theta0 = p0.reduced;
        const Chord c = chord(curve, theta0, delta);
        trace.vertices.push_back(curve.point_at_angle(theta0) + c.t0() * CurveModel::tangent_at_angle(theta0));
        trace.residuals.push_back(std::numeric_limits<double>::quiet_NaN());
    }
    return trace;
}

void OrbitTrace::write_csv(std::ostream& out) const {
    out << "step,s0,s1,eps,Px,Py,residual\n";
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const PhasePair& p = pairs[i];
        out << i << ',' << fmt(p.s0) << ',' << fmt(p.s1()) << ',' << fmt(p.eps) << ',' << fmt(vertices[i].x())
            << ',' << fmt(vertices[i].y()) << ',';
        if (std::isfinite(residuals[i])) out << fmt(residuals[i]);
        out << '\n';
    }
}

// ---------------------------------------------------------------------------

PhasePair pair_from_exterior_point(const CurveModel& curve, const Vec2& P) {
    // f(θ) > 0 exactly when P lies beyond the tangent line with normal angle θ
    auto f = [&](double t) { return P.x() * std::cos(t) + P.y() * std::sin(t) - curve.support(t); };
    constexpr int grid = 720;
    const double h = kTwoPi / grid;
    int best = 0;
    double fbest = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid; ++i) {
        const double v = f(h * i);
        if (v > fbest) {
            fbest = v;
            best = i;
        }
    }
    // golden-section refinement of the maximum
    double a = h * (best - 1), b = h * (best + 1);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 100 && b - a > 1e-15; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    const double tm = 0.5 * (a + b);
    const double fm = f(tm);
    const double scale = std::max(1.0, P.norm());
    if (!(fm > 1e-13 * scale)) throw Error(ErrorKind::InsidePoint, "point is inside or on the curve");

    auto find_zero = [&](double dir) {
        double x0 = tm, f0 = fm;
        for (int i = 1; i <= grid; ++i) {
            const double x1 = tm + dir * h * i;
            const double f1 = f(x1);
            if (f1 <= 0.0) {
                const double lo = std::min(x0, x1), hi = std::max(x0, x1);
                const double flo = dir > 0 ? f0 : f1, fhi = dir > 0 ? f1 : f0;
                const RootResult r = bracketed_root(f, lo, hi, flo, fhi);
                if (!r.converged) break;
                return r.root;
            }
            x0 = x1;
            f0 = f1;
        }
        throw Error(ErrorKind::DegenerateGeometry, "tangent from exterior point not found");
    };
    double theta0 = find_zero(-1.0);
    const double theta1 = find_zero(+1.0);
    const double delta = theta1 - theta0;
    check_angle_pair(delta);
    const AnglePoint p = AnglePoint::from_lifted(theta0);
    theta0 = p.reduced;
    return {curve.arclength_at_angle(theta0), curve.arc_between(theta0, theta0 + delta)};
}

}  // namespace olb
