#pragma once

// Generating function of the outer length billiard,
//   H(s0, s1) = ((γ1 − γ0) ∧ (γ1′ − γ0′)) / (γ0′ ∧ γ1′) = |Pγ0| + |Pγ1|,
// its partial derivatives, the near-diagonal Taylor polynomial and the
// caustic-obstruction quantity used in the Mather scan.

#include "olb/chord.hpp"
#include "olb/curve.hpp"

#include <iosfwd>
#include <vector>

namespace olb {

struct HJet {
    double H = 0.0;
    double H1 = 0.0, H2 = 0.0;
    double H11 = 0.0, H12 = 0.0, H22 = 0.0;
};

/// Wedge-ratio value. Throws DegeneratePair / ParallelTangents outside 𝒫.
double eval_H(const CurveModel& curve, double s0, double s1);
/// |Pγ(s0)| + |Pγ(s1)| from the intersection of the two tangent lines.
double eval_H_geometric(const CurveModel& curve, double s0, double s1);

/// H1, H11 in closed form; H2 by direct differentiation of the wedge ratio;
/// H12, H22 by Richardson-extrapolated central differences of H1 and H2.
HJet eval_H_jet(const CurveModel& curve, double s0, double s1);

/// δ + k²δ³/12 + kk′δ⁴/12 + (2k⁴ + 4k′² + 7kk″)δ⁵/240 with jets at s0.
double taylor_H(const CurveModel& curve, double s0, double delta);

/// H − taylor_H for the arc starting at normal angle θ0 with angular width Δ,
/// evaluated as (H − δ) − (taylor_H − δ) so that it stays accurate when the
/// remainder is far below the rounding level of H itself. Returns {δ, remainder}.
std::pair<double, double> taylor_remainder(const CurveModel& curve, double theta0, double delta_angle);

/// −(H22(s0,s1) + H11(s1,s2)) with s2 the image of (s0, s1) under the map.
/// Negative values are required for an invariant curve through the point.
double mather_criterion(const CurveModel& curve, double s0, double s1);

struct MatherScan {
    int n = 0;
    std::vector<double> s0;   // row-major n×n grid
    std::vector<double> eps;
    std::vector<double> M;
    double max = 0.0;
    double argmax_s0 = 0.0, argmax_eps = 0.0;

    void write_csv(std::ostream& out) const;
};

/// n×n grid s0 = iℓ/n, ε = (j+1)/(n+1)·(s0* − s0) of mather_criterion.
MatherScan mather_scan(const CurveModel& curve, int n);

/// |H12 − (−k0 k1 H / (2 sin²(φ/2)))| with φ = π − (θ1 − θ0) and H12 from
/// finite differences. `relative` divides by |H12|.
double twist_formula_check(const CurveModel& curve, double s0, double s1, bool relative = false);

// --- normal-angle level ----------------------------------------------------

struct WedgePartials {
    double H1 = 0.0, H2 = 0.0;
};

/// H1, H2 at the pair (θ0, θ0 + Δ) from the point jets and the chord vector.
WedgePartials wedge_partials(const CurveModel& curve, double theta0, double delta);

/// H11 at (θ0, θ0 + Δ) from the closed form in the point jets.
double closed_form_H11(const CurveModel& curve, double theta0, double delta);

/// Second partials in arclength from the chord integrals:
///   H12 = −k0 k1 H / (1 + cos Δ)
///   H11 = k0 (−κ0 t0 τ + τ + k0 t0 τ²),  H22 = k1 (κ1 t1 τ + τ + k1 t1 τ²)
/// with τ = tan(Δ/2) and κ = dk/dθ.
struct HessianBlock {
    double H11 = 0.0, H12 = 0.0, H22 = 0.0;
};
HessianBlock chord_hessian(const CurveModel& curve, const Chord& c);

/// First partials from the chord integrals: H1 = −1 − k0 t0 τ, H2 = 1 + k1 t1 τ.
WedgePartials chord_partials(const CurveModel& curve, const Chord& c);

/// Converts a lifted arclength pair to (θ0, Δ), validating phase space.
std::pair<double, double> angles_of_pair(const CurveModel& curve, double s0, double s1);

}  // namespace olb
