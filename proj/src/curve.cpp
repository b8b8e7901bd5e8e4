#include "olb/curve.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

namespace olb {

const char* to_string(CurveKind kind) {
    switch (kind) {
        case CurveKind::circle: return "circle";
        case CurveKind::ellipse: return "ellipse";
        case CurveKind::fourier_support: return "fourier_support";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// CurveSpec

CurveSpec CurveSpec::circle(double radius) {
    CurveSpec s;
    s.kind = CurveKind::circle;
    s.radius = radius;
    return s;
}

CurveSpec CurveSpec::ellipse(double a, double b) {
    CurveSpec s;
    s.kind = CurveKind::ellipse;
    s.a = a;
    s.b = b;
    return s;
}

CurveSpec CurveSpec::fourier(std::vector<FourierTerm> coeffs) {
    CurveSpec s;
    s.kind = CurveKind::fourier_support;
    s.coeffs = std::move(coeffs);
    return s;
}

CurveSpec CurveSpec::perturbed_circle(double amplitude, int harmonic) {
    return fourier({{0, 1.0, 0.0}, {harmonic, amplitude, 0.0}});
}

void CurveSpec::validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    switch (kind) {
        case CurveKind::circle:
            if (!finite(radius) || radius <= 0.0)
                throw Error(ErrorKind::BadSpec, "circle requires radius > 0");
            break;
        case CurveKind::ellipse:
            if (!finite(a) || !finite(b) || b <= 0.0 || a < b)
                throw Error(ErrorKind::BadSpec, "ellipse requires a >= b > 0");
            break;
        case CurveKind::fourier_support: {
            if (coeffs.empty()) throw Error(ErrorKind::BadSpec, "fourier_support requires coeffs");
            std::set<int> seen;
            for (const auto& t : coeffs) {
                if (t.n < 0) throw Error(ErrorKind::BadSpec, "harmonic index must be >= 0");
                if (!finite(t.cos_coeff) || !finite(t.sin_coeff))
                    throw Error(ErrorKind::BadSpec, "non-finite fourier coefficient");
                if (!seen.insert(t.n).second)
                    throw Error(ErrorKind::BadSpec, "duplicate harmonic index " + std::to_string(t.n));
            }
            break;
        }
    }
}

CurveSpec CurveSpec::rotated(double angle) const {
    switch (kind) {
        case CurveKind::circle: return *this;
        case CurveKind::ellipse:
            throw Error(ErrorKind::BadSpec, "ellipse specs are axis-aligned; use a fourier_support spec");
        case CurveKind::fourier_support: {
            CurveSpec out = *this;
            for (auto& t : out.coeffs) {
                const double c = std::cos(t.n * angle), s = std::sin(t.n * angle);
                const double cn = t.cos_coeff, sn = t.sin_coeff;
                t.cos_coeff = cn * c - sn * s;
                t.sin_coeff = cn * s + sn * c;
            }
            return out;
        }
    }
    return *this;
}

CurveSpec parse_curve_spec(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorKind::BadSpec, "curve spec must be a JSON object");
    static const std::set<std::string> known = {"kind", "radius", "a", "b", "coeffs"};
    for (const auto& item : j.items())
        if (!known.count(item.key())) throw Error(ErrorKind::BadSpec, "unknown field '" + item.key() + "'");
    if (!j.contains("kind") || !j["kind"].is_string())
        throw Error(ErrorKind::BadSpec, "missing string field 'kind'");

    auto number = [&](const char* key) {
        if (!j.contains(key) || !j[key].is_number())
            throw Error(ErrorKind::BadSpec, std::string("missing numeric field '") + key + "'");
        return j[key].get<double>();
    };
    auto reject = [&](std::initializer_list<const char*> keys, const std::string& kind) {
        for (const char* key : keys)
            if (j.contains(key))
                throw Error(ErrorKind::BadSpec, std::string("field '") + key + "' not valid for kind " + kind);
    };

    const std::string kind = j["kind"].get<std::string>();
    CurveSpec spec;
    if (kind == "circle") {
        reject({"a", "b", "coeffs"}, kind);
        spec = CurveSpec::circle(number("radius"));
    } else if (kind == "ellipse") {
        reject({"radius", "coeffs"}, kind);
        spec = CurveSpec::ellipse(number("a"), number("b"));
    } else if (kind == "fourier_support") {
        reject({"radius", "a", "b"}, kind);
        if (!j.contains("coeffs") || !j["coeffs"].is_array())
            throw Error(ErrorKind::BadSpec, "fourier_support requires array 'coeffs'");
        std::vector<FourierTerm> terms;
        for (const auto& row : j["coeffs"]) {
            if (!row.is_array() || row.size() != 3 || !row[0].is_number_integer() || !row[1].is_number() ||
                !row[2].is_number())
                throw Error(ErrorKind::BadSpec, "each coeff must be [n, cos_amplitude, sin_amplitude]");
            terms.push_back({row[0].get<int>(), row[1].get<double>(), row[2].get<double>()});
        }
        spec = CurveSpec::fourier(std::move(terms));
    } else {
        throw Error(ErrorKind::BadSpec, "unknown kind '" + kind + "'");
    }
    spec.validate();
    return spec;
}

CurveSpec load_curve_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::BadSpec, "cannot open spec file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::BadSpec, std::string("malformed JSON: ") + e.what());
    }
    return parse_curve_spec(j);
}

nlohmann::json to_json(const CurveSpec& spec) {
    nlohmann::json j;
    j["kind"] = to_string(spec.kind);
    switch (spec.kind) {
        case CurveKind::circle: j["radius"] = spec.radius; break;
        case CurveKind::ellipse:
            j["a"] = spec.a;
            j["b"] = spec.b;
            break;
        case CurveKind::fourier_support: {
            auto rows = nlohmann::json::array();
            for (const auto& t : spec.coeffs) rows.push_back({t.n, t.cos_coeff, t.sin_coeff});
            j["coeffs"] = rows;
            break;
        }
    }
    return j;
}

// ---------------------------------------------------------------------------
// Support function evaluation

double CurveModel::support(double theta) const {
    switch (spec_.kind) {
        case CurveKind::circle: return spec_.radius;
        case CurveKind::ellipse: return std::sqrt(e_alpha_ + e_beta_ * std::cos(2.0 * theta));
        case CurveKind::fourier_support: {
            double h = 0.0;
            for (const auto& t : spec_.coeffs)
                h += t.cos_coeff * std::cos(t.n * theta) + t.sin_coeff * std::sin(t.n * theta);
            return h;
        }
    }
    return 0.0;
}

double CurveModel::rho(double theta) const {
    switch (spec_.kind) {
        case CurveKind::circle: return spec_.radius;
        case CurveKind::ellipse: {
            const double f = e_alpha_ + e_beta_ * std::cos(2.0 * theta);
            return e_ab2_ / (f * std::sqrt(f));
        }
        case CurveKind::fourier_support: {
            double r = 0.0;
            for (const auto& t : spec_.coeffs) {
                const double w = 1.0 - static_cast<double>(t.n) * t.n;
                r += w * (t.cos_coeff * std::cos(t.n * theta) + t.sin_coeff * std::sin(t.n * theta));
            }
            return r;
        }
    }
    return 0.0;
}

std::pair<double, double> CurveModel::rho_with_derivative(double theta) const {
    switch (spec_.kind) {
        case CurveKind::circle: return {spec_.radius, 0.0};
        case CurveKind::ellipse: {
            const double f = e_alpha_ + e_beta_ * std::cos(2.0 * theta);
            const double df = -2.0 * e_beta_ * std::sin(2.0 * theta);
            const double r = e_ab2_ / (f * std::sqrt(f));
            return {r, -1.5 * r * df / f};
        }
        case CurveKind::fourier_support: {
            double r = 0.0, dr = 0.0;
            for (const auto& t : spec_.coeffs) {
                const double n = t.n;
                const double w = 1.0 - n * n;
                const double c = std::cos(n * theta), s = std::sin(n * theta);
                r += w * (t.cos_coeff * c + t.sin_coeff * s);
                dr += w * n * (-t.cos_coeff * s + t.sin_coeff * c);
            }
            return {r, dr};
        }
    }
    return {0.0, 0.0};
}

double CurveModel::curvature_angle_derivative(double theta) const {
    const auto [r, dr] = rho_with_derivative(theta);
    return -dr / (r * r);
}

Vec2 CurveModel::point_at_angle(double theta) const {
    double h = 0.0, dh = 0.0;
    switch (spec_.kind) {
        case CurveKind::circle: h = spec_.radius; break;
        case CurveKind::ellipse: {
            const double f = e_alpha_ + e_beta_ * std::cos(2.0 * theta);
            h = std::sqrt(f);
            dh = -e_beta_ * std::sin(2.0 * theta) / h;
            break;
        }
        case CurveKind::fourier_support:
            for (const auto& t : spec_.coeffs) {
                const double c = std::cos(t.n * theta), s = std::sin(t.n * theta);
                h += t.cos_coeff * c + t.sin_coeff * s;
                dh += t.n * (-t.cos_coeff * s + t.sin_coeff * c);
            }
            break;
    }
    return h * normal_at_angle(theta) + dh * tangent_at_angle(theta);
}

void CurveModel::support_series(double theta, Series<10>& h) const {
    constexpr std::size_t N = 10;
    h = Series<N>{};
    switch (spec_.kind) {
        case CurveKind::circle: h[0] = spec_.radius; break;
        case CurveKind::ellipse: {
            // f(θ+u) = α + β cos(2θ + 2u)
            Series<N> cs, sn;
            trig_series<N>(2.0 * theta, cs, sn);
            Series<N> f;
            double scale = 1.0;
            for (std::size_t i = 0; i < N; ++i) {
                f[i] = e_beta_ * cs[i] * scale;
                scale *= 2.0;
            }
            f[0] += e_alpha_;
            h = f.sqrt();
            break;
        }
        case CurveKind::fourier_support:
            for (const auto& t : spec_.coeffs) {
                Series<N> cs, sn;
                trig_series<N>(t.n * theta, cs, sn);
                double scale = 1.0;
                for (std::size_t i = 0; i < N; ++i) {
                    h[i] += (t.cos_coeff * cs[i] + t.sin_coeff * sn[i]) * scale;
                    scale *= t.n;
                }
            }
            break;
    }
}

CurveJet CurveModel::jet_at_angle(double theta, int order) const {
    if (order < 0 || order > 6) throw Error(ErrorKind::InvalidArgument, "jet order must be in 0..6");
    constexpr std::size_t N = 10;
    Series<N> h;
    support_series(theta, h);
    const Series<N> dh = h.derivative();
    const Series<N> rho_s = h + dh.derivative();
    const Series<N> inv_rho = rho_s.reciprocal();

    Series<N> cs, sn;
    trig_series<N>(theta, cs, sn);
    // γ = h·(cos, sin) + h'·(-sin, cos)
    Series<N> gx = h * cs - dh * sn;
    Series<N> gy = h * sn + dh * cs;

    // d/ds = (1/ρ) d/dθ
    auto d_ds = [&](const Series<N>& f) { return f.derivative() * inv_rho; };

    CurveJet jet;
    jet.theta = theta;
    jet.order = order;
    jet.gamma[0] = {gx[0], gy[0]};
    for (int n = 1; n <= order; ++n) {
        gx = d_ds(gx);
        gy = d_ds(gy);
        jet.gamma[n] = {gx[0], gy[0]};
    }
    Series<N> k = inv_rho;
    jet.k = k[0];
    k = d_ds(k);
    jet.dk = k[0];
    k = d_ds(k);
    jet.d2k = k[0];
    k = d_ds(k);
    jet.d3k = k[0];
    k = d_ds(k);
    jet.d4k = k[0];
    jet.s = arclength_at_angle(theta);
    return jet;
}

CurveJet CurveModel::jet_at(double s, int order) const {
    CurveJet jet = jet_at_angle(angle_at_arclength(s), order);
    jet.s = s;
    return jet;
}

double CurveModel::antipodal(double s) const {
    return arclength_at_angle(angle_at_arclength(s) + kPi);
}

// ---------------------------------------------------------------------------
// Cumulative tables and their inverses

double CurveModel::panel_length(double theta) const {
    const int bins = static_cast<int>(panel_.size());
    double r = std::fmod(theta, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    int bin = static_cast<int>(r / kTwoPi * bins);
    if (bin >= bins) bin = bins - 1;
    return panel_[bin];
}

double CurveModel::density(Density d, double theta) const {
    const double r = rho(theta);
    return d == Density::arclength ? r : std::cbrt(r);
}

double CurveModel::between(Density d, double theta0, double theta1) const {
    if (theta1 < theta0) return -between(d, theta1, theta0);
    return integrate(theta0, theta1, [&](double t) { return density(d, t); });
}

double CurveModel::cumulative(Density d, double theta) const {
    const auto& table = d == Density::arclength ? s_table_ : x_table_;
    const double wind = std::floor(theta / kTwoPi);
    double r = theta - wind * kTwoPi;
    const double h = kTwoPi / resolution_;
    int j = static_cast<int>(r / h);
    j = std::clamp(j, 0, resolution_ - 1);
    return wind * total(d) + table[j] + between(d, h * j, r);
}

double CurveModel::invert_cumulative(Density d, double value) const {
    const auto& table = d == Density::arclength ? s_table_ : x_table_;
    const double tot = total(d);
    const double wind = std::floor(value / tot);
    double r = value - wind * tot;
    if (r < 0.0) r = 0.0;
    if (r >= tot) r = std::nextafter(tot, 0.0);
    auto it = std::upper_bound(table.begin(), table.end(), r);
    int j = static_cast<int>(it - table.begin()) - 1;
    j = std::clamp(j, 0, resolution_ - 1);
    const double h = kTwoPi / resolution_;
    const double lo = h * j, hi = h * (j + 1);
    const double target = r - table[j];
    double t = lo + target / density(d, lo);
    t = std::clamp(t, lo, hi);
    for (int it2 = 0; it2 < 20; ++it2) {
        const double f = between(d, lo, t) - target;
        const double dt = f / density(d, t);
        t = std::clamp(t - dt, lo, hi);
        if (std::abs(dt) <= 1e-16 * (1.0 + std::abs(t))) break;
    }
    return wind * kTwoPi + t;
}

double CurveModel::advance(Density d, double theta0, double amount) const {
    if (amount == 0.0) return 0.0;
    const double sign = amount > 0.0 ? 1.0 : -1.0;
    const double target = std::abs(amount);
    const double cell = kTwoPi / resolution_;
    double delta;
    if (target < 0.5 * cell * density(d, theta0)) {
        delta = target / density(d, theta0);
    } else {
        delta = sign * (invert_cumulative(d, cumulative(d, theta0) + amount) - theta0);
        delta = std::max(delta, 0.0);
    }
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 60; ++it) {
        const double end = theta0 + sign * delta;
        const double f = sign * between(d, theta0, end) - target;
        if (f < 0.0) lo = delta; else hi = delta;
        if (std::abs(f) <= 2e-16 * target) break;
        double next = delta - f / density(d, end);
        if (!(next > lo && next < hi)) next = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * delta + cell;
        if (std::abs(next - delta) <= 1e-16 * std::abs(delta)) {
            delta = next;
            break;
        }
        delta = next;
    }
    return sign * delta;
}

double CurveModel::arclength_at_angle(double theta) const { return cumulative(Density::arclength, theta); }
double CurveModel::angle_at_arclength(double s) const { return invert_cumulative(Density::arclength, s); }
double CurveModel::arc_between(double theta0, double theta1) const {
    return between(Density::arclength, theta0, theta1);
}
double CurveModel::angle_advance(double theta0, double ds) const { return advance(Density::arclength, theta0, ds); }

double CurveModel::lazutkin_at_angle(double theta) const {
    return cumulative(Density::lazutkin, theta) / lazutkin_raw_;
}
double CurveModel::angle_at_lazutkin(double x) const {
    return invert_cumulative(Density::lazutkin, x * lazutkin_raw_);
}
double CurveModel::lazutkin_between(double theta0, double theta1) const {
    return between(Density::lazutkin, theta0, theta1) / lazutkin_raw_;
}
double CurveModel::lazutkin_advance(double theta0, double dx) const {
    return advance(Density::lazutkin, theta0, dx * lazutkin_raw_);
}

// ---------------------------------------------------------------------------
// Construction

namespace {

// Distance to the nearest complex zero of the local quadratic model of f.
double local_width(double f, double f1, double f2) {
    const double inf = std::numeric_limits<double>::infinity();
    if (std::abs(f2) < 1e-14 * std::abs(f)) return f1 != 0.0 ? std::abs(f / f1) : inf;
    const double disc = f1 * f1 - 2.0 * f * f2;
    if (disc < 0.0) return std::sqrt(-disc) / std::abs(f2);
    const double sq = std::sqrt(disc);
    const double r1 = std::abs((-f1 + sq) / f2), r2 = std::abs((-f1 - sq) / f2);
    return std::min(r1, r2);
}

}  // namespace

CurveModel CurveModel::build(const CurveSpec& spec, int resolution) {
    spec.validate();
    if (resolution < 256) throw Error(ErrorKind::BadSpec, "resolution must be >= 256");

    CurveModel m;
    m.spec_ = spec;
    m.resolution_ = resolution;
    if (spec.kind == CurveKind::ellipse) {
        m.e_alpha_ = 0.5 * (spec.a * spec.a + spec.b * spec.b);
        m.e_beta_ = 0.5 * (spec.a * spec.a - spec.b * spec.b);
        m.e_ab2_ = spec.a * spec.a * spec.b * spec.b;
    }

    // Convexity and curvature bounds on the validation grid.
    double rho_min = std::numeric_limits<double>::infinity(), rho_max = 0.0;
    std::vector<double> width(kValidationGrid);
    for (int i = 0; i < kValidationGrid; ++i) {
        const double theta = kTwoPi * i / kValidationGrid;
        Series<10> h;
        m.support_series(theta, h);
        const Series<10> r = h + h.derivative().derivative();
        rho_min = std::min(rho_min, r[0]);
        rho_max = std::max(rho_max, r[0]);
        if (r[0] > 0.0) {
            const Series<10> k = r.reciprocal();
            width[i] = std::min(local_width(r[0], r[1], 2.0 * r[2]), local_width(k[0], k[1], 2.0 * k[2]));
        }
    }
    if (!(rho_min > 0.0))
        throw Error(ErrorKind::NonConvex, "radius of curvature h + h'' reaches " + std::to_string(rho_min));
    m.k_min_ = 1.0 / rho_max;
    m.k_max_ = 1.0 / rho_min;

    double global = 0.5;
    if (spec.kind == CurveKind::ellipse && spec.a > spec.b) global = std::min(global, std::atanh(spec.b / spec.a));
    constexpr int bins = 256;
    constexpr int per_bin = kValidationGrid / bins;
    m.panel_.assign(bins, global);
    for (int bidx = 0; bidx < bins; ++bidx) {
        double w = global;
        for (int nb = -1; nb <= 1; ++nb) {
            const int bb = (bidx + nb + bins) % bins;
            for (int i = 0; i < per_bin; ++i) w = std::min(w, width[bb * per_bin + i]);
        }
        m.panel_[bidx] = std::clamp(w, 1e-5, 0.5);
    }

    m.s_table_.assign(resolution + 1, 0.0);
    m.x_table_.assign(resolution + 1, 0.0);
    const double h = kTwoPi / resolution;
    // compensated running sums keep the totals at full precision
    double cs = 0.0, cx = 0.0;
    auto kahan = [](double sum, double inc, double& comp) {
        const double y = inc - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        return t;
    };
    for (int j = 0; j < resolution; ++j) {
        const auto inc = m.integrate(h * j, h * (j + 1), [&](double t) {
            const double r = m.rho(t);
            return std::array<double, 2>{r, std::cbrt(r)};
        });
        m.s_table_[j + 1] = kahan(m.s_table_[j], inc[0], cs);
        m.x_table_[j + 1] = kahan(m.x_table_[j], inc[1], cx);
    }
    m.length_ = m.s_table_.back();
    m.lazutkin_raw_ = m.x_table_.back();
    m.lazutkin_ = m.lazutkin_raw_;
    return m;
}

double periodic_quadrature(const CurveModel& curve, const std::function<double(const CurveJet&)>& f,
                           int jet_order) {
    return curve.periodic_quadrature(f, jet_order);
}

}  // namespace olb
