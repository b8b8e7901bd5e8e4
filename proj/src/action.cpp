#include "olb/action.hpp"

#include "olb/chord.hpp"
#include "olb/errors.hpp"
#include "olb/generating.hpp"
#include "olb/io.hpp"
#include "olb/numerics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <future>
#include <ostream>

namespace olb {

namespace {

// Symmetric cyclic tridiagonal system: diag d, coupling e[i] between i and
// i+1 (e[n-1] couples n-1 and 0). Nodes 0..n-2 are eliminated as a plain
// tridiagonal block while the last node is carried as a border. Returns false
// if a pivot is not positive.
bool solve_cyclic(const std::vector<double>& d, const std::vector<double>& e, const std::vector<double>& r,
                  std::vector<double>& x) {
    const int n = static_cast<int>(d.size());
    x.assign(n, 0.0);
    if (n == 1) {
        if (!(d[0] > 0.0)) return false;
        x[0] = r[0] / d[0];
        return true;
    }
    const int m = n - 1;
    std::vector<double> D(m), B(m, 0.0), y(m);
    B[0] = e[n - 1];
    B[m - 1] += e[m - 1];
    D[0] = d[0];
    y[0] = r[0];
    if (!(D[0] > 0.0)) return false;
    for (int i = 1; i < m; ++i) {
        const double l = e[i - 1] / D[i - 1];
        D[i] = d[i] - l * e[i - 1];
        B[i] -= l * B[i - 1];
        y[i] = r[i] - l * y[i - 1];
        if (!(D[i] > 0.0)) return false;
    }
    double Dn = d[n - 1], yn = r[n - 1];
    for (int i = 0; i < m; ++i) {
        Dn -= B[i] * B[i] / D[i];
        yn -= B[i] * y[i] / D[i];
    }
    if (!(Dn > 0.0)) return false;
    x[n - 1] = yn / Dn;
    x[m - 1] = (y[m - 1] - B[m - 1] * x[n - 1]) / D[m - 1];
    for (int i = m - 2; i >= 0; --i) x[i] = (y[i] - e[i] * x[i + 1] - B[i] * x[n - 1]) / D[i];
    return true;
}

struct Evaluation {
    std::vector<Chord> chords;
    std::vector<double> grad;  // ∂A/∂θ_i
    double excess = 0.0;
    double arc = 0.0;
    double residual = 0.0;  // max |∂A/∂s_i|
    bool valid = false;
};

double lifted_next(const std::vector<double>& theta, int i) {
    const int q = static_cast<int>(theta.size());
    return i + 1 < q ? theta[i + 1] : theta[0] + kTwoPi;
}

Evaluation evaluate(const CurveModel& curve, const std::vector<double>& theta) {
    const int q = static_cast<int>(theta.size());
    Evaluation ev;
    ev.chords.resize(q);
    for (int i = 0; i < q; ++i) {
        const double delta = lifted_next(theta, i) - theta[i];
        if (!(delta > 0.0 && delta < kPi)) return ev;
        ev.chords[i] = chord(curve, theta[i], delta);
        ev.excess += ev.chords[i].excess;
        ev.arc += ev.chords[i].arc;
    }
    ev.grad.resize(q);
    for (int i = 0; i < q; ++i) {
        const Chord& in = ev.chords[(i + q - 1) % q];
        const Chord& out = ev.chords[i];
        // ∂H/∂θ of the incoming and outgoing chords, ρk = 1 removes the 1s
        ev.grad[i] = in.radius_at_end() - out.radius_at_start();
        ev.residual = std::max(ev.residual, std::abs(ev.grad[i] * curve.curvature_at_angle(theta[i])));
    }
    ev.valid = true;
    return ev;
}

// Hessian in θ: diag(ρ) H_ss diag(ρ) + diag(ρ′ ∂A/∂s).
void hessian(const CurveModel& curve, const std::vector<double>& theta, const Evaluation& ev, std::vector<double>& d,
             std::vector<double>& e) {
    const int q = static_cast<int>(theta.size());
    std::vector<HessianBlock> blocks(q);
    std::vector<double> rho(q), drho(q);
    for (int i = 0; i < q; ++i) {
        blocks[i] = chord_hessian(curve, ev.chords[i]);
        std::tie(rho[i], drho[i]) = curve.rho_with_derivative(theta[i]);
    }
    d.assign(q, 0.0);
    e.assign(q, 0.0);
    for (int i = 0; i < q; ++i) {
        const int prev = (i + q - 1) % q, next = (i + 1) % q;
        const double gs = ev.grad[i] / rho[i];
        d[i] = rho[i] * rho[i] * (blocks[prev].H22 + blocks[i].H11) + drho[i] * gs;
        e[i] = rho[i] * rho[next] * blocks[i].H12;
    }
}

OrbitConfig finish(const CurveModel& curve, const std::vector<double>& theta, const Evaluation& ev, int iterations) {
    OrbitConfig out;
    out.q = static_cast<int>(theta.size());
    out.theta = theta;
    out.s.resize(out.q);
    for (int i = 0; i < out.q; ++i) out.s[i] = curve.arclength_at_angle(theta[i]);
    out.excess = ev.excess;
    out.action = curve.length() + ev.excess;
    out.residual = ev.residual;
    out.iterations = iterations;
    return out;
}

std::vector<double> canonical_angles(const CurveModel& curve, const OrbitConfig& init, int q) {
    std::vector<double> theta = init.theta;
    if (theta.empty()) {
        theta.resize(init.s.size());
        for (std::size_t i = 0; i < init.s.size(); ++i) theta[i] = curve.angle_at_arclength(init.s[i]);
    }
    if (static_cast<int>(theta.size()) != q) throw Error(ErrorKind::InvalidArgument, "initial configuration has wrong size");
    const double shift = kTwoPi * std::floor(theta[0] / kTwoPi);
    for (double& t : theta) t -= shift;
    for (int i = 0; i < q; ++i) {
        const double delta = lifted_next(theta, i) - theta[i];
        if (!(delta > 0.0 && delta < kPi))
            throw Error(ErrorKind::MonotonicityLoss, "initial configuration is not a circumscribed polygon");
    }
    return theta;
}

}  // namespace

OrbitConfig lazutkin_configuration(const CurveModel& curve, int q, double x0) {
    if (q < 3) throw Error(ErrorKind::InvalidArgument, "q must be at least 3");
    OrbitConfig c;
    c.q = q;
    c.theta.resize(q);
    c.s.resize(q);
    for (int i = 0; i < q; ++i) {
        c.theta[i] = curve.angle_at_lazutkin(x0 + static_cast<double>(i) / q);
        c.s[i] = curve.arclength_at_angle(c.theta[i]);
    }
    return c;
}

OrbitConfig configuration_from_arclengths(const CurveModel& curve, const std::vector<double>& s) {
    OrbitConfig c;
    c.q = static_cast<int>(s.size());
    c.s = s;
    c.theta.resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) c.theta[i] = curve.angle_at_arclength(s[i]);
    return c;
}

namespace {

struct NewtonResult {
    std::vector<double> theta;
    Evaluation ev;
    int iterations = 0;
};

double matrix_scale(const std::vector<double>& d) {
    double scale = 0.0;
    for (double v : d) scale = std::max(scale, std::abs(v));
    return scale;
}

// Levenberg-Marquardt damped Newton on the cyclic action. Steps must lower the
// action; once the change is at rounding level a lower residual is enough.
NewtonResult newton(const CurveModel& curve, std::vector<double> theta, const MinimizeOptions& opts, double tol) {
    const int q = static_cast<int>(theta.size());
    Evaluation ev = evaluate(curve, theta);
    std::vector<double> d, e, step, dm, rhs(q), trial(q);
    double mu = 0.0;
    int it = 0;
    for (; it < opts.max_iterations && ev.residual > tol; ++it) {
        hessian(curve, theta, ev, d, e);
        const double floor = 1e-12 * matrix_scale(d);
        mu = std::max(0.1 * mu, floor);
        for (int i = 0; i < q; ++i) rhs[i] = -ev.grad[i];
        bool accepted = false;
        for (int attempt = 0; attempt < 60; ++attempt) {
            if (attempt > 0) mu *= 10.0;
            dm = d;
            for (double& v : dm) v += mu;
            if (!solve_cyclic(dm, e, rhs, step)) continue;
            // keep every gap inside (Δ/2, Δ + (π − Δ)/2)
            double alpha = 1.0;
            for (int i = 0; i < q; ++i) {
                const double delta = lifted_next(theta, i) - theta[i];
                const double change = step[(i + 1) % q] - step[i];
                if (change < 0.0) alpha = std::min(alpha, 0.5 * delta / -change);
                if (change > 0.0) alpha = std::min(alpha, 0.5 * (kPi - delta) / change);
            }
            for (int i = 0; i < q; ++i) trial[i] = theta[i] + alpha * step[i];
            Evaluation next = evaluate(curve, trial);
            if (!next.valid) continue;
            const double slack = 1e-13 * std::abs(ev.excess);
            const bool lower = next.excess < ev.excess;
            const bool level = std::abs(next.excess - ev.excess) <= slack && next.residual < ev.residual;
            if (lower || level) {
                theta = trial;
                ev = std::move(next);
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
    }
    return {std::move(theta), std::move(ev), it};
}

// Positive semidefinite up to a small shift that absorbs the near-flat
// rotation direction.
bool hessian_is_psd(const CurveModel& curve, const std::vector<double>& theta, const Evaluation& ev) {
    std::vector<double> d, e, x;
    hessian(curve, theta, ev, d, e);
    const double shift = 1e-10 * matrix_scale(d);
    for (double& v : d) v += shift;
    return solve_cyclic(d, e, std::vector<double>(theta.size(), 1.0), x);
}

}  // namespace

OrbitConfig minimize_orbit(const CurveModel& curve, int q, const std::optional<OrbitConfig>& init,
                           const MinimizeOptions& opts) {
    if (q < 3) throw Error(ErrorKind::InvalidArgument, "q must be at least 3");
    std::vector<double> theta = canonical_angles(curve, init ? *init : lazutkin_configuration(curve, q), q);
    const double tol = opts.tol_residual * curve.length();

    // A critical point that is not a minimum sits between minima along the
    // rotation direction; restart half a lattice step away in Lazutkin phase.
    constexpr int kRestarts = 4;
    int total = 0;
    std::optional<NewtonResult> best;
    bool best_psd = false;
    for (int round = 0; round <= kRestarts; ++round) {
        NewtonResult r = newton(curve, theta, opts, tol);
        total += r.iterations;
        if (!(r.ev.residual <= tol)) {
            if (best) break;
            throw Error(ErrorKind::NoConvergence,
                        "orbit minimisation for q=" + std::to_string(q) + " stalled at residual " + fmt(r.ev.residual));
        }
        const bool psd = hessian_is_psd(curve, r.theta, r.ev);
        if (!best || (psd && !best_psd) || (psd == best_psd && r.ev.excess < best->ev.excess)) {
            best = r;
            best_psd = psd;
        }
        if (psd) break;
        const double shift = (round % 2 == 0 ? 0.5 : 0.25) / q;
        theta = lazutkin_configuration(curve, q, curve.lazutkin_at_angle(r.theta[0]) + shift).theta;
        theta = canonical_angles(curve, OrbitConfig{q, {}, theta}, q);
    }
    OrbitConfig out = finish(curve, best->theta, best->ev, total);
    out.hessian_psd = best_psd;
    return out;
}

double beta_of(const CurveModel& curve, int q, const MinimizeOptions& opts) {
    return minimize_orbit(curve, q, std::nullopt, opts).beta();
}

std::vector<Vec2> orbit_vertices(const CurveModel& curve, const OrbitConfig& orbit) {
    std::vector<double> theta = orbit.theta;
    if (theta.empty()) theta = configuration_from_arclengths(curve, orbit.s).theta;
    const int q = static_cast<int>(theta.size());
    std::vector<Vec2> out(q);
    for (int i = 0; i < q; ++i) {
        const double t1 = theta[i];
        const double t2 = i + 1 < q ? theta[i + 1] : theta[0] + kTwoPi;
        const Chord c = chord(curve, t1, t2 - t1);
        out[i] = curve.point_at_angle(t1) + c.t0() * CurveModel::tangent_at_angle(t1);
    }
    return out;
}

TheoreticalCoeffs theoretical_coeffs(const CurveModel& curve) {
    const double L = curve.lazutkin_constant();
    const double I = periodic_quadrature(
        curve,
        [](const CurveJet& j) {
            return std::pow(j.k, 4.0 / 3.0) / 120.0 + std::pow(j.k, -8.0 / 3.0) * j.dk * j.dk / 2160.0;
        },
        1);
    TheoreticalCoeffs c;
    c.b1 = curve.length();
    c.b3 = L * L * L / 12.0;
    c.b5 = L * L * L * L * I;
    return c;
}

double isoperimetric_defect(const CurveModel& curve) {
    const double L = curve.lazutkin_constant();
    return L * L * L / 4.0 - kPi * kPi * curve.length();
}

double FitResult::coeff(int power) const {
    for (std::size_t i = 0; i < powers.size(); ++i)
        if (powers[i] == power) return coeffs[i];
    throw Error(ErrorKind::InvalidArgument, "power " + std::to_string(power) + " not in the fit basis");
}

FitResult fit_beta(const std::vector<int>& q, const std::vector<double>& beta, const std::vector<int>& powers,
                   double weight_power, double max_condition) {
    const int n = static_cast<int>(q.size()), m = static_cast<int>(powers.size());
    if (n != static_cast<int>(beta.size())) throw Error(ErrorKind::InvalidArgument, "q and beta sizes differ");
    if (m == 0 || n < m) throw Error(ErrorKind::IllConditionedFit, "fewer data points than fit parameters");
    Eigen::MatrixXd A(n, m);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
        const double w = std::pow(static_cast<double>(q[i]), weight_power);
        for (int j = 0; j < m; ++j) A(i, j) = w * std::pow(static_cast<double>(q[i]), -powers[j]);
        b(i) = w * beta[i];
    }
    // column equilibration so the condition number reflects the basis, not units
    Eigen::VectorXd colscale(m);
    for (int j = 0; j < m; ++j) {
        colscale(j) = A.col(j).norm();
        A.col(j) /= colscale(j);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    FitResult out;
    out.powers = powers;
    out.condition = sv(m - 1) > 0.0 ? sv(0) / sv(m - 1) : std::numeric_limits<double>::infinity();
    if (!(out.condition <= max_condition))
        throw Error(ErrorKind::IllConditionedFit, "fit condition number " + fmt(out.condition));
    const Eigen::VectorXd x = svd.solve(b);
    out.coeffs.resize(m);
    for (int j = 0; j < m; ++j) out.coeffs[j] = x(j) / colscale(j);
    return out;
}

std::vector<OrbitConfig> minimize_all(const CurveModel& curve, const std::vector<int>& q_list,
                                      const MinimizeOptions& opts) {
    std::vector<std::future<OrbitConfig>> jobs;
    jobs.reserve(q_list.size());
    for (int q : q_list)
        jobs.push_back(std::async(std::launch::async, [&curve, q, opts] { return minimize_orbit(curve, q, std::nullopt, opts); }));
    std::vector<OrbitConfig> out;
    out.reserve(jobs.size());
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

std::vector<int> doubling_ladder(int qmin, int qmax) {
    if (qmin < 3 || qmax < qmin) throw Error(ErrorKind::InvalidArgument, "need 3 <= qmin <= qmax");
    std::vector<int> out;
    for (long q = qmin; q <= qmax; q *= 2) out.push_back(static_cast<int>(q));
    return out;
}

BetaReport fit_coeffs(const CurveModel& curve, const std::vector<int>& q_list, const std::vector<int>& powers,
                      const MinimizeOptions& opts) {
    if (q_list.size() < 4) throw Error(ErrorKind::InvalidArgument, "need at least 4 values of q");
    const auto [lo, hi] = std::minmax_element(q_list.begin(), q_list.end());
    if (*lo < 3) throw Error(ErrorKind::InvalidArgument, "q must be at least 3");
    if (*hi < 8 * *lo) throw Error(ErrorKind::InvalidArgument, "q values must span at least a factor 8");

    BetaReport r;
    r.q = q_list;
    r.length = curve.length();
    for (const OrbitConfig& o : minimize_all(curve, q_list, opts)) {
        r.beta.push_back(o.beta());
        r.beta_excess.push_back(o.beta_excess());
        r.iterations.push_back(o.iterations);
    }
    // fit β − ℓ/q, which is known to full relative precision, then restore ℓ
    if (std::find(powers.begin(), powers.end(), 1) == powers.end())
        throw Error(ErrorKind::InvalidArgument, "fit basis must contain q^-1");
    r.fit = fit_beta(r.q, r.beta_excess, powers);
    for (std::size_t i = 0; i < powers.size(); ++i)
        if (powers[i] == 1) r.fit.coeffs[i] += r.length;
    r.theoretical = theoretical_coeffs(curve);
    r.defect = isoperimetric_defect(curve);
    return r;
}

nlohmann::json BetaReport::to_json() const {
    nlohmann::json fitted = nlohmann::json::object();
    for (std::size_t i = 0; i < fit.powers.size(); ++i) fitted["b" + std::to_string(fit.powers[i])] = fit.coeffs[i];
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < q.size(); ++i)
        rows.push_back({{"q", q[i]}, {"beta", beta[i]}, {"beta_minus_length_over_q", beta_excess[i]},
                        {"iterations", iterations[i]}});
    auto rel = [](double a, double b) { return b != 0.0 ? std::abs(a - b) / std::abs(b) : std::abs(a); };
    nlohmann::json j = {
        {"length", length},
        {"orbits", rows},
        {"fit", {{"coefficients", fitted}, {"condition", fit.condition}}},
        {"theoretical", {{"b1", theoretical.b1}, {"b3", theoretical.b3}, {"b5", theoretical.b5}}},
        {"isoperimetric_defect", defect},
    };
    nlohmann::json errs = nlohmann::json::object();
    for (auto [p, v] : {std::pair{1, theoretical.b1}, {3, theoretical.b3}, {5, theoretical.b5}})
        if (std::find(fit.powers.begin(), fit.powers.end(), p) != fit.powers.end())
            errs["b" + std::to_string(p)] = rel(fit.coeff(p), v);
    j["relative_error"] = errs;
    return j;
}

void BetaReport::write_csv(std::ostream& out) const {
    out << "q,beta,beta_minus_length_over_q,iterations\n";
    for (std::size_t i = 0; i < q.size(); ++i)
        out << q[i] << ',' << fmt(beta[i]) << ',' << fmt(beta_excess[i]) << ',' << iterations[i] << '\n';
}

namespace {

// I(θ) = (1/L) ∫_0^θ F k^{2/3} ρ dθ′ + c·x(θ) with c chosen so I is periodic;
// the second-order position term is q²(s_k − σ_k) ≈ (b1(x_k)/L)(I(x_k) − I(x_0)).
struct SecondOrder {
    const CurveModel& curve;
    double L, total, c;

    static double integrand(const CurveModel& curve, double L, double theta) {
        const CurveJet j = curve.jet_at_angle(theta, 1);
        const double k = j.k;
        const double f = L * L * L *
                             ((9.0 * j.d2k * std::pow(k, -7.0 / 3.0) - 12.0 * j.dk * j.dk * std::pow(k, -10.0 / 3.0)) /
                                  810.0 +
                              std::pow(k, 2.0 / 3.0) / 15.0);
        return f * std::pow(k, 2.0 / 3.0) / k / L;
    }

    explicit SecondOrder(const CurveModel& cv) : curve(cv), L(cv.lazutkin_constant()) {
        total = curve.integrate(0.0, kTwoPi, [&](double t) { return integrand(curve, L, t); });
        c = -total;
    }

    double operator()(double theta) const {
        const double base = std::floor(theta / kTwoPi);
        const double r = theta - base * kTwoPi;
        const double part = curve.integrate(0.0, r, [&](double t) { return integrand(curve, L, t); });
        return base * total + part + c * curve.lazutkin_at_angle(theta);
    }
};

}  // namespace

OrbitAsymptotics orbit_asymptotics_check(const CurveModel& curve, const std::vector<int>& q_list,
                                         const MinimizeOptions& opts) {
    OrbitAsymptotics r;
    r.q = q_list;
    const double L = curve.lazutkin_constant();
    const SecondOrder I(curve);
    const auto orbits = minimize_all(curve, q_list, opts);
    for (std::size_t n = 0; n < q_list.size(); ++n) {
        const OrbitConfig& o = orbits[n];
        const int q = o.q;
        const double x0 = curve.lazutkin_at_angle(o.theta[0]);
        const double I0 = I(o.theta[0]);
        double pos = 0.0, gap = 0.0, emp = 0.0, pred = 0.0, disc = 0.0;
        for (int k = 0; k < q; ++k) {
            const double sk = curve.arclength_at_angle(o.theta[k]);
            const double theta_next = k + 1 < q ? o.theta[k + 1] : o.theta[0] + kTwoPi;
            const double eps = curve.arc_between(o.theta[k], theta_next);
            const double sigma_theta = curve.angle_at_lazutkin(x0 + static_cast<double>(k) / q);
            const double sigma = curve.arclength_at_angle(sigma_theta);
            const CurveJet j = curve.jet_at_angle(sigma_theta, 1);
            const double b1 = L * std::pow(j.k, -2.0 / 3.0);
            const double b2 = -L * L * j.dk * std::pow(j.k, -7.0 / 3.0) / 3.0;
            pos = std::max(pos, std::abs(sk - sigma));
            gap = std::max(gap, std::abs(eps - b1 / q - b2 / (static_cast<double>(q) * q)));
            const double e_k = static_cast<double>(q) * q * (sk - sigma);
            const double p_k = b1 / L * (I(sigma_theta) - I0);
            emp = std::max(emp, std::abs(e_k));
            pred = std::max(pred, std::abs(p_k));
            disc = std::max(disc, std::abs(e_k - p_k));
        }
        r.position_error.push_back(pos);
        r.gap_error.push_back(gap);
        r.a2_empirical.push_back(emp);
        r.a2_formula.push_back(pred);
        r.a2_discrepancy.push_back(disc);
    }
    std::vector<double> qd(q_list.begin(), q_list.end());
    r.position_slope = loglog_slope(qd, r.position_error);
    r.gap_slope = loglog_slope(qd, r.gap_error);
    return r;
}

nlohmann::json OrbitAsymptotics::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < q.size(); ++i)
        rows.push_back({{"q", q[i]},
                        {"position_error", position_error[i]},
                        {"gap_error", gap_error[i]},
                        {"a2_empirical", a2_empirical[i]},
                        {"a2_formula", a2_formula[i]},
                        {"a2_discrepancy", a2_discrepancy[i]}});
    return {{"rows", rows}, {"position_slope", position_slope}, {"gap_slope", gap_slope}};
}

}  // namespace olb
