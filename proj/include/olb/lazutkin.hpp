#pragma once

// Lazutkin coordinates x(s) = (1/L)∫₀^s k^{2/3}, the conjugated map
// (x, y) ↦ (x + y, y′), and confocal-ellipse caustic probes.

#include "olb/billiard.hpp"
#include "olb/curve.hpp"

#include <iosfwd>
#include <vector>

namespace olb {

/// Lifted Lazutkin coordinate: x(s + ℓ) = x(s) + 1.
double lazutkin_x(const CurveModel& curve, double s);
/// Inverse of lazutkin_x on the lift.
double lazutkin_inverse(const CurveModel& curve, double x);

struct LazutkinPoint {
    double x = 0.0;
    double y = 0.0;
};

/// One step of the map in Lazutkin coordinates. The input y is the Lazutkin
/// width of the pair (x⁻¹(x), x⁻¹(x + y)); the output x is exactly x + y.
LazutkinPoint conjugated_step(const CurveModel& curve, LazutkinPoint p, const BilliardOptions& opts = {});

/// Ellipse confocal to the one with semi-axes (a, b): √(a²+λ), √(b²+λ).
CurveSpec confocal_ellipse(double a, double b, double lambda);

/// Semi-axes of an ellipse or circle spec; throws BadParams otherwise.
std::pair<double, double> ellipse_axes(const CurveSpec& spec);

struct CausticProbe {
    double a = 0.0, b = 0.0;          // inner curve semi-axes (0 for non-ellipses)
    double lambda = 0.0;              // confocal parameter (NaN for a free candidate)
    double gamma_a = 0.0, gamma_b = 0.0;  // candidate caustic Γ
    int steps = 0;
    std::vector<Vec2> vertices;       // P_0 … P_steps
    std::vector<double> deviations;   // |⟨P, n(θ_P)⟩ − h_Γ(θ_P)|
    double max_deviation = 0.0;

    void write_csv(std::ostream& out) const;
};

/// Point of the ellipse with semi-axes (A, B) at eccentric angle t.
Vec2 ellipse_point(double A, double B, double t);

/// Signed distance-like residual of P against the ellipse (A, B) measured
/// through the support function in the direction of the level-set gradient.
double ellipse_support_residual(double A, double B, const Vec2& P);

/// Iterates the map around `inner` from the exterior point P0 on the ellipse
/// Γ = (A, B) and records how far each vertex leaves Γ.
CausticProbe caustic_drift(const CurveModel& inner, double A, double B, const Vec2& P0, int n,
                           const BilliardOptions& opts = {});

/// Confocal version: inner must be an ellipse or circle spec, Γ from λ.
CausticProbe caustic_drift(const CurveModel& inner, double lambda, double start_angle, int n,
                           const BilliardOptions& opts = {});

/// |(P1 − P0)·(Q − R)| / (|P1 − P0||Q − R|) for the chord of Γ through P0
/// tangent to the inner curve at Q (positive tangent), with R the meeting
/// point of the tangents to Γ at P0 and P1.
double orthogonality_check(const CurveModel& inner, const CurveModel& gamma, const Vec2& P0);

}  // namespace olb
