#pragma once

// Small numerical building blocks shared by the modules: truncated Taylor
// series, Gauss-Legendre rules, a bracketed root solver and log-log fits.

#include <Eigen/Core>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace olb {

using Vec2 = Eigen::Vector2d;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// a ∧ b
inline double wedge(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Rotation by +π/2.
inline Vec2 rot90(const Vec2& v) { return {-v.y(), v.x()}; }

// ---------------------------------------------------------------------------
// Truncated power series in one variable, coefficients c[0..N-1].

template <std::size_t N>
struct Series {
    std::array<double, N> c{};

    static Series constant(double v) {
        Series s;
        s.c[0] = v;
        return s;
    }

    double operator[](std::size_t i) const { return c[i]; }
    double& operator[](std::size_t i) { return c[i]; }

    Series& operator+=(const Series& o) {
        for (std::size_t i = 0; i < N; ++i) c[i] += o.c[i];
        return *this;
    }
    Series& operator-=(const Series& o) {
        for (std::size_t i = 0; i < N; ++i) c[i] -= o.c[i];
        return *this;
    }
    Series& operator*=(double v) {
        for (auto& x : c) x *= v;
        return *this;
    }
    friend Series operator+(Series a, const Series& b) { return a += b; }
    friend Series operator-(Series a, const Series& b) { return a -= b; }
    friend Series operator*(Series a, double v) { return a *= v; }
    friend Series operator*(double v, Series a) { return a *= v; }

    friend Series operator*(const Series& a, const Series& b) {
        Series r;
        for (std::size_t i = 0; i < N; ++i) {
            if (a.c[i] == 0.0) continue;
            for (std::size_t j = 0; i + j < N; ++j) r.c[i + j] += a.c[i] * b.c[j];
        }
        return r;
    }

    /// d/du; the top coefficient is lost.
    Series derivative() const {
        Series r;
        for (std::size_t i = 0; i + 1 < N; ++i) r.c[i] = static_cast<double>(i + 1) * c[i + 1];
        return r;
    }

    Series reciprocal() const {
        Series r;
        r.c[0] = 1.0 / c[0];
        for (std::size_t n = 1; n < N; ++n) {
            double acc = 0.0;
            for (std::size_t i = 1; i <= n; ++i) acc += c[i] * r.c[n - i];
            r.c[n] = -acc * r.c[0];
        }
        return r;
    }

    Series sqrt() const {
        Series r;
        r.c[0] = std::sqrt(c[0]);
        for (std::size_t n = 1; n < N; ++n) {
            double acc = c[n];
            for (std::size_t i = 1; i < n; ++i) acc -= r.c[i] * r.c[n - i];
            r.c[n] = acc / (2.0 * r.c[0]);
        }
        return r;
    }

    /// n-th derivative at the expansion point.
    double derivative_at_origin(std::size_t n) const {
        double f = 1.0;
        for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
        return c[n] * f;
    }
};

/// Taylor coefficients of cos(a+u) and sin(a+u) in u.
template <std::size_t N>
void trig_series(double a, Series<N>& cos_s, Series<N>& sin_s) {
    const double ca = std::cos(a);
    const double sa = std::sin(a);
    double fact = 1.0;
    for (std::size_t n = 0; n < N; ++n) {
        if (n > 0) fact *= static_cast<double>(n);
        // d^n/du^n cos(a+u) = cos(a + nπ/2)
        double cn = 0.0, sn = 0.0;
        switch (n % 4) {
            case 0: cn = ca; sn = sa; break;
            case 1: cn = -sa; sn = ca; break;
            case 2: cn = -ca; sn = -sa; break;
            default: cn = sa; sn = -ca; break;
        }
        cos_s.c[n] = cn / fact;
        sin_s.c[n] = sn / fact;
    }
}

// ---------------------------------------------------------------------------
// Gauss-Legendre rule on [-1, 1].

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Full N-point rule expanded from Boost's half-rule tables.
template <int N>
const GaussRule& gauss_legendre() {
    static const GaussRule rule = [] {
        using G = boost::math::quadrature::gauss<double, N>;
        GaussRule r;
        const auto& x = G::abscissa();
        const auto& w = G::weights();
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] == 0.0) {
                r.nodes.push_back(0.0);
                r.weights.push_back(w[i]);
                continue;
            }
            r.nodes.push_back(-x[i]);
            r.weights.push_back(w[i]);
            r.nodes.push_back(x[i]);
            r.weights.push_back(w[i]);
        }
        return r;
    }();
    return rule;
}

// ---------------------------------------------------------------------------
// Root of a sign-changing bracket (TOMS 748).

struct RootResult {
    double root = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Requires f(a) and f(b) of opposite sign (or one of them zero). `xtol` is an
/// absolute bracket width added to the relative machine-precision floor.
template <class F>
RootResult bracketed_root(F&& f, double a, double b, double fa, double fb, double xtol = 0.0,
                          int max_iter = 200) {
    if (fa == 0.0) return {a, 0, true};
    if (fb == 0.0) return {b, 0, true};
    if ((fa > 0.0) == (fb > 0.0)) return {0.5 * (a + b), 0, false};
    constexpr double eps = 2.220446049250313e-16;
    auto done = [xtol](double lo, double hi) {
        return std::abs(hi - lo) <= 4.0 * eps * std::max(std::abs(lo), std::abs(hi)) + xtol;
    };
    std::uintmax_t iters = max_iter;
    const auto [lo, hi] = boost::math::tools::toms748_solve(f, a, b, fa, fb, done, iters);
    const double flo = f(lo);
    RootResult out;
    out.iterations = static_cast<int>(iters);
    out.converged = done(lo, hi);
    // keep whichever end has the smaller residual
    out.root = (flo == 0.0 || std::abs(flo) <= std::abs(f(hi))) ? lo : hi;
    return out;
}

// ---------------------------------------------------------------------------

/// Least-squares slope of log|y| against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Geometric sequence of `n` points from lo to hi inclusive.
std::vector<double> geomspace(double lo, double hi, int n);

}  // namespace olb
