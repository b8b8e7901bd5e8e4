#pragma once

// Minimal circumscribed q-gons (periodic orbits of rotation number 1/q), the
// Mather β-function at 1/q, coefficient fits against the asymptotic series
// β(1/q) ~ β1/q + β3/q³ + β5/q⁵ + …, and the closed-form coefficients.

#include "olb/curve.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

namespace olb {

struct OrbitConfig {
    int q = 0;
    std::vector<double> s;      // s[0] ∈ [0, ℓ), strictly increasing, s[q] = s[0] + ℓ implied
    std::vector<double> theta;  // normal angles of the same points, θ[0] ∈ [0, 2π)
    double action = 0.0;        // Σ H(s_i, s_{i+1})
    double excess = 0.0;        // action − ℓ, accumulated without cancellation
    double residual = 0.0;      // max_i |H2(s_{i−1}, s_i) + H1(s_i, s_{i+1})|
    int iterations = 0;
    bool hessian_psd = false;

    double beta() const { return action / q; }
    /// β(1/q) − ℓ/q
    double beta_excess() const { return excess / q; }
};

struct MinimizeOptions {
    int max_iterations = 200;
    /// Convergence when the residual is below tol_residual·ℓ.
    double tol_residual = 1e-12;
};

/// Newton minimisation of the cyclic action. `init` supplies a starting
/// configuration; by default points are equidistributed in the Lazutkin
/// coordinate starting at x = 0.
OrbitConfig minimize_orbit(const CurveModel& curve, int q, const std::optional<OrbitConfig>& init = std::nullopt,
                           const MinimizeOptions& opts = {});

/// Starting configuration equidistributed in the Lazutkin coordinate from x0.
OrbitConfig lazutkin_configuration(const CurveModel& curve, int q, double x0 = 0.0);

/// Configuration built from lifted arclengths (s.size() == q).
OrbitConfig configuration_from_arclengths(const CurveModel& curve, const std::vector<double>& s);

double beta_of(const CurveModel& curve, int q, const MinimizeOptions& opts = {});

/// Vertices of the circumscribed polygon of an orbit.
std::vector<Vec2> orbit_vertices(const CurveModel& curve, const OrbitConfig& orbit);

struct TheoreticalCoeffs {
    double b1 = 0.0, b3 = 0.0, b5 = 0.0;
};

/// β1 = ℓ, β3 = L³/12, β5 = L⁴ ∫ (k^{4/3}/120 + k^{−8/3}k′²/2160) ds.
TheoreticalCoeffs theoretical_coeffs(const CurveModel& curve);

/// D = L³/4 − π²ℓ ≤ 0, zero only for circles.
double isoperimetric_defect(const CurveModel& curve);

struct FitResult {
    std::vector<int> powers;
    std::vector<double> coeffs;
    double condition = 0.0;

    double coeff(int power) const;
};

/// Weighted least squares of β(1/q) on {q^{-p}}, rows weighted by q^weight_power.
/// Throws IllConditionedFit above `max_condition`.
FitResult fit_beta(const std::vector<int>& q, const std::vector<double>& beta, const std::vector<int>& powers,
                   double weight_power = 5.0, double max_condition = 1e13);

inline const std::vector<int> kDefaultFitPowers{1, 3, 5, 7, 9};
inline const std::vector<int> kEvenCheckPowers{1, 2, 3, 4, 5, 7, 9};

struct BetaReport {
    std::vector<int> q;
    std::vector<double> beta;
    std::vector<double> beta_excess;  // β − ℓ/q
    std::vector<int> iterations;
    FitResult fit;
    TheoreticalCoeffs theoretical;
    double length = 0.0;
    double defect = 0.0;

    nlohmann::json to_json() const;
    void write_csv(std::ostream& out) const;
};

/// β(1/q) for every q (computed concurrently, reduced in input order).
std::vector<OrbitConfig> minimize_all(const CurveModel& curve, const std::vector<int>& q_list,
                                      const MinimizeOptions& opts = {});

/// Requires ≥ 4 values of q spanning at least a factor 8.
BetaReport fit_coeffs(const CurveModel& curve, const std::vector<int>& q_list,
                      const std::vector<int>& powers = kDefaultFitPowers, const MinimizeOptions& opts = {});

/// Doubling ladder qmin, 2qmin, … ≤ qmax.
std::vector<int> doubling_ladder(int qmin, int qmax);

struct OrbitAsymptotics {
    std::vector<int> q;
    std::vector<double> position_error;  // max_k |s_k − a0(x(s_0) + k/q)|
    std::vector<double> gap_error;       // max_k |ε_k − b1/q − b2/q²|
    double position_slope = 0.0;         // fitted against q (expected −2)
    double gap_slope = 0.0;              // expected −3
    // second-order position term, reported only
    std::vector<double> a2_empirical;    // max_k q²|s_k − σ_k|
    std::vector<double> a2_formula;      // max_k of the closed-form prediction
    std::vector<double> a2_discrepancy;  // max_k |empirical − prediction|

    nlohmann::json to_json() const;
};

OrbitAsymptotics orbit_asymptotics_check(const CurveModel& curve, const std::vector<int>& q_list,
                                         const MinimizeOptions& opts = {});

}  // namespace olb
