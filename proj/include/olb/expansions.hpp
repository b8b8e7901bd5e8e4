#pragma once

// Log-log remainder fits for the near-boundary expansions: the generating
// function polynomial, the map expansion ε1 = ε0 + Aε0² + Bε0³ + Cε0⁴ and the
// Lazutkin normal form y′ = y + O(y⁴).

#include "olb/curve.hpp"

#include <string>
#include <vector>

namespace olb {

struct SlopeReport {
    std::string name;
    std::vector<double> x;  // small parameter
    std::vector<double> y;  // max |remainder| over the sampled base points
    double slope = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;

    bool pass() const { return std::abs(slope - expected) <= tolerance; }
};

struct MapCoeffs {
    double A = 0.0, B = 0.0, C = 0.0;
};

/// A = −2k′/(3k), B = 10k′²/(9k²) − 2k″/(3k),
/// C = (−24k⁴k′ − 1160k′³ + 1200kk′k″ − 216k²k‴)/(540k³), at normal angle θ.
MapCoeffs map_expansion_coeffs(const CurveModel& curve, double theta);

/// ε1 for the pair starting at θ0 with arclength ε0. Returns {ε0 as realised
/// by the quadrature, ε1}.
std::pair<double, double> map_eps_step(const CurveModel& curve, double theta0, double eps0);

/// Base points spread over the curve (normal angles).
std::vector<double> sample_angles(int n, double offset = 0.1);

SlopeReport taylor_H_check(const CurveModel& curve, int base_points = 8, int levels = 13);
SlopeReport map_expansion_check(const CurveModel& curve, int base_points = 8, int levels = 13);
SlopeReport lazutkin_check(const CurveModel& curve, int base_points = 8, int levels = 12);

struct CoefficientCheck {
    std::vector<double> s;
    std::vector<double> extracted;
    std::vector<double> predicted;
    double max_relative_error = 0.0;
};

/// A(s) from Richardson extrapolation of (ε1 − ε0)/ε0² as ε0 → 0 at n points
/// where |A| is not small, compared with −2k′/(3k).
CoefficientCheck map_A_check(const CurveModel& curve, int n = 10);

}  // namespace olb
