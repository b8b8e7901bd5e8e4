#pragma once

// Integral representation of a boundary arc [θ0, θ0 + Δ] and of the two
// tangent segments from its endpoints to the vertex P where the tangents
// meet. Every quantity is an integral of a non-negative density, so relative
// accuracy is kept as Δ → 0 where the point-based wedge formulas cancel.
//
//   lead   = ∫ ρ sin(θ1 − θ) dθ = t0 sin Δ,   t0 = |P γ(θ0)|
//   trail  = ∫ ρ sin(θ − θ0) dθ = t1 sin Δ,   t1 = |P γ(θ1)|
//   arc    = ∫ ρ dθ
//   excess = t0 + t1 − arc = (2 / cos(Δ/2)) ∫ ρ sin((θ1−θ)/2) sin((θ−θ0)/2) dθ

#include "olb/curve.hpp"

namespace olb {

struct Chord {
    double theta0 = 0.0;
    double delta = 0.0;
    double lead = 0.0;
    double trail = 0.0;
    double arc = 0.0;
    double excess = 0.0;

    double theta1() const { return theta0 + delta; }
    double t0() const { return lead / std::sin(delta); }
    double t1() const { return trail / std::sin(delta); }
    /// Tangent-length sum |Pγ0| + |Pγ1|.
    double H() const { return arc + excess; }
    double tan_half() const { return std::tan(0.5 * delta); }
    /// 1 + cos Δ without cancellation near Δ = π.
    double one_plus_cos() const {
        const double c = std::cos(0.5 * delta);
        return 2.0 * c * c;
    }
    /// Radius of the exterior circle tangent to the boundary at γ(θ1) and to
    /// the tangent line at γ(θ0): t1·tan(Δ/2).
    double radius_at_end() const { return trail / one_plus_cos(); }
    /// Same construction with the roles swapped: t0·tan(Δ/2).
    double radius_at_start() const { return lead / one_plus_cos(); }
};

/// All four integrals over [θ0, θ0 + Δ], 0 < Δ < π.
Chord chord(const CurveModel& curve, double theta0, double delta);

/// Only the lead integral (used inside root solves).
double chord_lead(const CurveModel& curve, double theta0, double delta);

/// γ(θ0 + Δ) − γ(θ0) = ∫ ρ T dθ.
Vec2 chord_vector(const CurveModel& curve, double theta0, double delta);

}  // namespace olb
