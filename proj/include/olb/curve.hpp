#pragma once

// Strictly convex closed curves described by their support function h(θ),
// θ being the angle of the outward normal. The radius of curvature is
// ρ(θ) = h(θ) + h''(θ) and arclength satisfies ds/dθ = ρ. All dynamics code
// works in θ internally and converts to arclength at the boundary of the API.

#include "olb/errors.hpp"
#include "olb/numerics.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <functional>
#include <string>
#include <type_traits>
#include <vector>

namespace olb {

enum class CurveKind { circle, ellipse, fourier_support };

const char* to_string(CurveKind kind);

/// One harmonic of the support function: cos_coeff·cos(nθ) + sin_coeff·sin(nθ).
struct FourierTerm {
    int n = 0;
    double cos_coeff = 0.0;
    double sin_coeff = 0.0;
};

struct CurveSpec {
    CurveKind kind = CurveKind::circle;
    double radius = 1.0;             // circle
    double a = 0.0, b = 0.0;         // ellipse semi-axes, a along x
    std::vector<FourierTerm> coeffs; // fourier_support

    static CurveSpec circle(double radius);
    static CurveSpec ellipse(double a, double b);
    static CurveSpec fourier(std::vector<FourierTerm> coeffs);
    /// h(θ) = 1 + amplitude·cos(harmonic·θ)
    static CurveSpec perturbed_circle(double amplitude, int harmonic = 3);

    /// Throws BadSpec on invalid parameters (convexity is checked by build).
    void validate() const;

    /// Same body rotated counter-clockwise by `angle`. Ellipses are not
    /// closed under this representation and raise BadSpec.
    CurveSpec rotated(double angle) const;
};

CurveSpec parse_curve_spec(const nlohmann::json& j);
CurveSpec load_curve_spec(const std::string& path);
nlohmann::json to_json(const CurveSpec& spec);

/// Arclength jet at one boundary point. gamma[n] is the n-th arclength
/// derivative of the position for n ≤ order; curvature derivatives are
/// always filled.
struct CurveJet {
    double s = 0.0;
    double theta = 0.0;
    int order = 0;
    std::array<Vec2, 7> gamma{};
    double k = 0.0, dk = 0.0, d2k = 0.0, d3k = 0.0, d4k = 0.0;

    const Vec2& point() const { return gamma[0]; }
    const Vec2& tangent() const { return gamma[1]; }
};

class CurveModel {
public:
    static constexpr int kValidationGrid = 4096;
    static constexpr int kDefaultResolution = 4096;
    static constexpr int kGaussNodes = 20;

    /// Throws BadSpec / NonConvex.
    static CurveModel build(const CurveSpec& spec, int resolution = kDefaultResolution);

    const CurveSpec& spec() const { return spec_; }
    int resolution() const { return resolution_; }
    double length() const { return length_; }
    /// L = ∫ k^{2/3} ds
    double lazutkin_constant() const { return lazutkin_; }
    double min_curvature() const { return k_min_; }
    double max_curvature() const { return k_max_; }

    // --- normal-angle level -------------------------------------------------
    double support(double theta) const;
    double rho(double theta) const;
    /// (ρ, dρ/dθ)
    std::pair<double, double> rho_with_derivative(double theta) const;
    double curvature_at_angle(double theta) const { return 1.0 / rho(theta); }
    /// dk/dθ = -ρ'/ρ²
    double curvature_angle_derivative(double theta) const;
    Vec2 point_at_angle(double theta) const;
    static Vec2 tangent_at_angle(double theta) { return {-std::sin(theta), std::cos(theta)}; }
    static Vec2 normal_at_angle(double theta) { return {std::cos(theta), std::sin(theta)}; }

    /// Lifted arclength s(θ) with s(0) = 0 and s(θ + 2π) = s(θ) + ℓ.
    double arclength_at_angle(double theta) const;
    double angle_at_arclength(double s) const;
    /// ∫_{θ0}^{θ1} ρ dθ computed directly (no table differences).
    double arc_between(double theta0, double theta1) const;
    /// Δ with ∫_{θ0}^{θ0+Δ} ρ dθ = ds.
    double angle_advance(double theta0, double ds) const;

    /// Lazutkin coordinate x(θ) = (1/L) ∫_0^θ ρ^{1/3} dθ, lifted.
    double lazutkin_at_angle(double theta) const;
    double angle_at_lazutkin(double x) const;
    double lazutkin_between(double theta0, double theta1) const;
    double lazutkin_advance(double theta0, double dx) const;

    CurveJet jet_at_angle(double theta, int order) const;
    CurveJet jet_at(double s, int order) const;

    /// Arclength s* whose tangent is antiparallel to the one at s, lifted
    /// into (s, s + ℓ).
    double antipodal(double s) const;

    /// Composite Gauss-Legendre over [a, b] (a ≤ b) with panels sized to the
    /// analyticity strip of ρ. `f` returns double or std::array<double, M>.
    template <class F>
    auto integrate(double a, double b, F&& f) const;

    /// Trapezoid rule ∫_0^ℓ f(jet) ds evaluated in θ with weight ρ.
    template <class F>
    double periodic_quadrature(F&& f, int jet_order = 1) const;

    double panel_length(double theta) const;

private:
    enum class Density { arclength, lazutkin };

    CurveModel() = default;
    double density(Density d, double theta) const;
    double cumulative(Density d, double theta) const;
    double invert_cumulative(Density d, double value) const;
    double advance(Density d, double theta0, double amount) const;
    double between(Density d, double theta0, double theta1) const;
    double total(Density d) const { return d == Density::arclength ? length_ : lazutkin_raw_; }
    void support_series(double theta, Series<10>& h) const;

    CurveSpec spec_;
    int resolution_ = 0;
    double length_ = 0.0;
    double lazutkin_raw_ = 0.0;  // ∫ρ^{1/3} dθ over one turn
    double lazutkin_ = 0.0;
    double k_min_ = 0.0, k_max_ = 0.0;
    // ellipse cache
    double e_alpha_ = 0.0, e_beta_ = 0.0, e_ab2_ = 0.0;
    std::vector<double> s_table_;
    std::vector<double> x_table_;
    std::vector<double> panel_;
};

/// ∫_0^ℓ f(jet(s)) ds.
double periodic_quadrature(const CurveModel& curve, const std::function<double(const CurveJet&)>& f,
                           int jet_order = 1);

// ---------------------------------------------------------------------------

namespace detail {
inline void accumulate(double& acc, double w, double v) { acc += w * v; }
template <std::size_t M>
inline void accumulate(std::array<double, M>& acc, double w, const std::array<double, M>& v) {
    for (std::size_t i = 0; i < M; ++i) acc[i] += w * v[i];
}
}  // namespace detail

template <class F>
auto CurveModel::integrate(double a, double b, F&& f) const {
    using R = std::decay_t<decltype(f(a))>;
    R acc{};
    if (!(b > a)) return acc;
    const GaussRule& rule = gauss_legendre<kGaussNodes>();
    double x = a;
    for (;;) {
        double len = panel_length(x);
        len = std::min(len, panel_length(x + len));
        const bool last = len >= b - x;
        if (last) len = b - x;
        const double half = 0.5 * len;
        const double mid = x + half;
        for (int i = 0; i < kGaussNodes; ++i)
            detail::accumulate(acc, rule.weights[i] * half, f(mid + half * rule.nodes[i]));
        if (last) break;
        x += len;
    }
    return acc;
}

template <class F>
double CurveModel::periodic_quadrature(F&& f, int jet_order) const {
    const int n = resolution_;
    const double h = kTwoPi / n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double theta = h * i;
        CurveJet jet = jet_at_angle(theta, jet_order);
        jet.s = s_table_[i];
        acc += f(jet) * rho(theta);
    }
    return acc * h;
}

}  // namespace olb
