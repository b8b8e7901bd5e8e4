#pragma once

// The outer length billiard map T(s0, s1) = (s1, s2). A point P outside the
// curve is identified with its two tangency parameters (s0, s1). The circle
// outside the curve tangent to it at γ(s1) and to the line Pγ(s0) has radius
// ℛ = t1 tan(Δ01/2); s2 is chosen so that the same circle is tangent to the
// line from γ(s1) to the next vertex, i.e. t0′ tan(Δ12/2) = ℛ.

#include "olb/chord.hpp"
#include "olb/curve.hpp"

#include <iosfwd>
#include <vector>

namespace olb {

struct PhasePair {
    double s0 = 0.0;
    double eps = 0.0;

    double s1() const { return s0 + eps; }
    static PhasePair from_endpoints(double s0, double s1) { return {s0, s1 - s0}; }
};

struct BilliardOptions {
    /// δ_min as a fraction of ℓ.
    double delta_min = 1e-8;
    /// Absolute tolerance on the root in normal angle (0 = machine precision).
    double tol_root = 0.0;
    /// Bound on |H2(s0,s1) + H1(s1,s2)| accepted by iterate().
    double tol_residual = 1e-9;
};

/// Vertex P where the tangents at s0 and s1 meet.
Vec2 tangent_intersection(const CurveModel& curve, double s0, double s1);

/// ℛ = ((γ0 − γ1) ∧ γ0′)/(1 + γ0′·γ1′), the radius of the circle tangent to the
/// curve at γ(s1) and to the tangent line at γ(s0).
double tangent_circle_radius(const CurveModel& curve, double s0, double s1);

/// ((γ1 − γ0) ∧ γ1′)/(1 + γ0′·γ1′), the ratio with the two points exchanged.
/// Kept for comparison; it does not define a map satisfying the variational law.
double exchanged_radius_ratio(const CurveModel& curve, double s0, double s1);

PhasePair step(const CurveModel& curve, const PhasePair& pair, const BilliardOptions& opts = {});

/// Same map from the variational law H2(s0,s1) + H1(s1,s2) = 0 solved with the
/// wedge-product partials.
PhasePair step_variational(const CurveModel& curve, const PhasePair& pair, const BilliardOptions& opts = {});

/// H2(s0,s1) + H1(s1,s2) from the wedge-product partials.
double variational_residual(const CurveModel& curve, double s0, double s1, double s2);

struct OrbitTrace {
    std::vector<PhasePair> pairs;  // pairs[0] is the start
    std::vector<Vec2> vertices;    // tangent intersection of each pair
    std::vector<double> residuals; // residual of the step leaving pairs[i]; NaN for the last

    void write_csv(std::ostream& out) const;
};

/// n ≥ 1 applications of step().
OrbitTrace iterate(const CurveModel& curve, const PhasePair& start, int n, const BilliardOptions& opts = {});

/// Tangency parameters of the two tangents through an exterior point, ordered
/// so that the pair lies in phase space. Throws InsidePoint.
PhasePair pair_from_exterior_point(const CurveModel& curve, const Vec2& P);

// --- normal-angle level ------------------------------------------------------

/// Lifted normal angle with a separate turn count so long orbits keep full
/// precision: θ = reduced + 2π·turns, reduced ∈ [0, 2π).
struct AnglePoint {
    double reduced = 0.0;
    long turns = 0;

    static AnglePoint from_lifted(double theta);
    double lifted() const { return reduced + kTwoPi * static_cast<double>(turns); }
    AnglePoint advanced(double delta) const { return normalise(reduced + delta, turns); }
    double arclength(const CurveModel& curve) const;

private:
    static AnglePoint normalise(double reduced, long turns);
};

/// Δ12 for the pair (θ1 − Δ01, θ1); throws RootBracketFailure.
double next_angle_step(const CurveModel& curve, double theta1, double radius, const BilliardOptions& opts = {});

/// Δ12 solving H2(θ0, θ1) + H1(θ1, θ1 + Δ12) = 0 with the wedge partials.
double next_angle_step_variational(const CurveModel& curve, double theta0, double delta01,
                                   const BilliardOptions& opts = {});

}  // namespace olb
