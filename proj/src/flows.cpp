#include "frontlab/flows.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace frontlab::flows {

namespace {

constexpr double T = kTwoPi;

double spectral_norm(const Mat2& m) {
    // singular values of a 2x2: sigma^2 = e +- sqrt(e^2 - f^2),
    // e = ||M||_F^2 / 2, f = det M
    double e = 0.5 * (m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d);
    double f = m.det();
    double disc = e * e - f * f;
    if (disc < 0.0) disc = 0.0;
    return std::sqrt(e + std::sqrt(disc));
}

// torus distance on [0,1)^2
double torus_dist(Vec2 a, Vec2 b) {
    double dx = std::fabs(a.x - b.x);
    double dy = std::fabs(a.y - b.y);
    dx = std::min(dx, 1.0 - dx);
    dy = std::min(dy, 1.0 - dy);
    return std::sqrt(dx * dx + dy * dy);
}

const std::map<std::string, FlowKind> kCatalog = {
    {"zero", FlowKind::zero},
    {"cellular", FlowKind::cellular},
    {"shear", FlowKind::shear},
    {"cats_eye", FlowKind::cats_eye},
    {"two_scale", FlowKind::two_scale},
    {"half_log_lip", FlowKind::half_log_lip},
    {"unsteady_cellular", FlowKind::unsteady_cellular},
    {"abc", FlowKind::abc},
    {"kolmogorov", FlowKind::kolmogorov},
};

const std::map<FlowKind, std::vector<std::string>> kAllowedParams = {
    {FlowKind::zero, {}},
    {FlowKind::cellular, {}},
    {FlowKind::shear, {}},
    {FlowKind::cats_eye, {"delta"}},
    {FlowKind::two_scale, {}},
    {FlowKind::half_log_lip, {}},
    {FlowKind::unsteady_cellular, {"U", "B", "omega", "r"}},
    {FlowKind::abc, {"a", "b", "c"}},
    {FlowKind::kolmogorov, {}},
};

}  // namespace

std::vector<std::string> catalog_names() {
    return {"zero",         "cellular",          "shear",
            "cats_eye",     "two_scale",         "half_log_lip",
            "unsteady_cellular", "abc",           "kolmogorov"};
}

Flow Flow::make(const std::string& name,
                const std::map<std::string, double>& params) {
    auto it = kCatalog.find(name);
    if (it == kCatalog.end()) {
        throw ConfigError("unknown flow '" + name + "'");
    }
    Flow f;
    f.name_ = name;
    f.kind_ = it->second;
    f.params_ = params;

    const auto& allowed = kAllowedParams.at(f.kind_);
    for (const auto& [k, v] : params) {
        (void)v;
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
            throw ConfigError("flow '" + name + "' has no parameter '" + k + "'");
        }
    }

    switch (f.kind_) {
        case FlowKind::cats_eye:
            f.delta_ = f.param("delta", 0.5);
            if (!(f.delta_ > 0.0 && f.delta_ < 1.0)) {
                throw ConfigError("cats_eye requires delta in (0,1)");
            }
            break;
        case FlowKind::abc:
            f.dim_ = 3;
            f.abc_a_ = f.param("a", 1.0);
            f.abc_b_ = f.param("b", 1.0);
            f.abc_c_ = f.param("c", 1.0);
            break;
        case FlowKind::kolmogorov:
            f.dim_ = 3;
            break;
        case FlowKind::unsteady_cellular:
            f.time_dependent_ = true;
            f.uamp_ = f.param("U", 1.0);
            f.ub_ = f.param("B", 0.5);
            f.uomega_ = f.param("omega", kTwoPi);
            f.uholder_ = f.param("r", 1.0);
            break;
        case FlowKind::half_log_lip:
            f.lipschitz_ = false;
            break;
        default:
            break;
    }
    f.finalize();
    return f;
}

Flow Flow::make_custom(std::string name, int dim, bool time_dependent,
                       Vec2 (*velocity)(Vec2, double),
                       double (*stream)(Vec2, double)) {
    if (dim != 2) throw ArgumentError("custom flows are 2D only");
    if (!velocity) throw ArgumentError("custom flow needs a velocity callable");
    Flow f;
    f.name_ = std::move(name);
    f.kind_ = FlowKind::zero;  // kind is meaningless for customs
    f.dim_ = dim;
    f.time_dependent_ = time_dependent;
    f.custom_velocity_ = velocity;
    f.custom_stream_ = stream;
    f.finalize();
    return f;
}

double Flow::param(const std::string& key, double fallback) const {
    auto it = params_.find(key);
    return it == params_.end() ? fallback : it->second;
}

std::string Flow::params_string() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : params_) {  // std::map iterates sorted
        if (!first) os << ';';
        os << k << '=' << v;
        first = false;
    }
    return os.str();
}

double Flow::phase_shift(double t) const {
    if (kind_ != FlowKind::unsteady_cellular) return 0.0;
    return ub_ * std::sin(uomega_ * t);
}

Vec2 Flow::velocity(Vec2 x, double t) const {
    if (custom_velocity_) return custom_velocity_(x, t);
    if (dim_ != 2) throw ArgumentError("2D velocity requested from a 3D flow");
    switch (kind_) {
        case FlowKind::zero:
            return {0.0, 0.0};
        case FlowKind::cellular: {
            double s1 = std::sin(T * x.x), c1 = std::cos(T * x.x);
            double s2 = std::sin(T * x.y), c2 = std::cos(T * x.y);
            return {-T * s1 * c2, T * c1 * s2};
        }
        case FlowKind::shear:
            return {std::sin(T * x.y), 0.0};
        case FlowKind::cats_eye: {
            double s1 = std::sin(T * x.x), c1 = std::cos(T * x.x);
            double s2 = std::sin(T * x.y), c2 = std::cos(T * x.y);
            return {-T * (s1 * c2 - delta_ * c1 * s2),
                    T * (c1 * s2 - delta_ * s1 * c2)};
        }
        case FlowKind::two_scale: {
            double s1 = std::sin(T * x.x), c1 = std::cos(T * x.x);
            double s2 = std::sin(T * x.y), c2 = std::cos(T * x.y);
            double S1 = std::sin(3 * T * x.x), C1 = std::cos(3 * T * x.x);
            double S2 = std::sin(3 * T * x.y), C2 = std::cos(3 * T * x.y);
            return {-T * s1 * c2 + 0.9 * T * C1 * S2,
                    T * c1 * s2 - 0.9 * T * S1 * C2};
        }
        case FlowKind::half_log_lip: {
            double s1 = std::sin(T * x.x), c1 = std::cos(T * x.x);
            double s2 = std::sin(T * x.y), c2 = std::cos(T * x.y);
            double ss = s1 * s1 + s2 * s2;
            if (ss == 0.0) return {0.0, 0.0};  // removable singularity
            double q = 0.25 * ss;
            double r = std::sqrt(-std::log(q));
            double hx1 = T * c1 * s2 * (r - s1 * s1 / (ss * r));
            double hx2 = T * c2 * s1 * (r - s2 * s2 / (ss * r));
            return {-hx2, hx1};
        }
        case FlowKind::unsteady_cellular: {
            double a = phase_shift(t);
            double sa = std::sin(T * (x.x + a)), ca = std::cos(T * (x.x + a));
            double s2 = std::sin(T * x.y), c2 = std::cos(T * x.y);
            return {-T * uamp_ * sa * c2, T * uamp_ * ca * s2};
        }
        default:
            throw ArgumentError("velocity: unhandled flow kind");
    }
}

Vec3 Flow::velocity3(Vec3 x, double t) const {
    if (dim_ == 2) {
        Vec2 v = velocity({x.x, x.y}, t);
        return {v.x, v.y, 0.0};
    }
    switch (kind_) {
        case FlowKind::abc: {
            double s1 = std::sin(T * x.x), c1 = std::cos(T * x.x);
            double s2 = std::sin(T * x.y), c2 = std::cos(T * x.y);
            double s3 = std::sin(T * x.z), c3 = std::cos(T * x.z);
            return {abc_a_ * s3 + abc_c_ * c2, abc_b_ * s1 + abc_a_ * c3,
                    abc_c_ * s2 + abc_b_ * c1};
        }
        case FlowKind::kolmogorov:
            return {std::sin(T * x.z), std::sin(T * x.x), std::sin(T * x.y)};
        default:
            throw ArgumentError("velocity3: unhandled flow kind");
    }
}

double Flow::stream(Vec2 x, double t) const {
    if (dim_ != 2) throw UnsupportedError("stream function undefined for 3D flows");
    if (custom_stream_) return custom_stream_(x, t);
    if (custom_velocity_) throw UnsupportedError("custom flow has no stream function");
    switch (kind_) {
        case FlowKind::zero:
            return 0.0;
        case FlowKind::cellular:
            return std::sin(T * x.x) * std::sin(T * x.y);
        case FlowKind::shear:
            return std::cos(T * x.y) / T;
        case FlowKind::cats_eye:
            return std::sin(T * x.x) * std::sin(T * x.y) +
                   delta_ * std::cos(T * x.x) * std::cos(T * x.y);
        case FlowKind::two_scale:
            return std::sin(T * x.x) * std::sin(T * x.y) +
                   0.3 * std::cos(3 * T * x.x) * std::cos(3 * T * x.y);
        case FlowKind::half_log_lip: {
            double s1 = std::sin(T * x.x), s2 = std::sin(T * x.y);
            double ss = s1 * s1 + s2 * s2;
            if (ss == 0.0) return 0.0;
            return s1 * s2 * std::sqrt(-std::log(0.25 * ss));
        }
        case FlowKind::unsteady_cellular: {
            double a = phase_shift(t);
            return uamp_ * std::sin(T * (x.x + a)) * std::sin(T * x.y);
        }
        default:
            throw UnsupportedError("stream: unhandled flow kind");
    }
}

Mat2 Flow::jacobian(Vec2 x, double t) const {
    if (dim_ != 2) throw ArgumentError("jacobian is 2D only");
    if (custom_velocity_ || kind_ == FlowKind::half_log_lip) {
        const double h = 1e-6;
        Vec2 vxp = velocity({x.x + h, x.y}, t), vxm = velocity({x.x - h, x.y}, t);
        Vec2 vyp = velocity({x.x, x.y + h}, t), vym = velocity({x.x, x.y - h}, t);
        return {(vxp.x - vxm.x) / (2 * h), (vyp.x - vym.x) / (2 * h),
                (vxp.y - vxm.y) / (2 * h), (vyp.y - vym.y) / (2 * h)};
    }
    switch (kind_) {
        case FlowKind::zero:
            return {};
        case FlowKind::cellular: {
            double s1 = std::sin(T * x.x), c1 = std::cos(T * x.x);
            double s2 = std::sin(T * x.y), c2 = std::cos(T * x.y);
            double t2 = T * T;
            return {-t2 * c1 * c2, t2 * s1 * s2, -t2 * s1 * s2, t2 * c1 * c2};
        }
        case FlowKind::shear:
            return {0.0, T * std::cos(T * x.y), 0.0, 0.0};
        case FlowKind::cats_eye: {
            double s1 = std::sin(T * x.x), c1 = std::cos(T * x.x);
            double s2 = std::sin(T * x.y), c2 = std::cos(T * x.y);
            double t2 = T * T;
            double u = c1 * c2 + delta_ * s1 * s2;
            double w = s1 * s2 + delta_ * c1 * c2;
            return {-t2 * u, t2 * w, -t2 * w, t2 * u};
        }
        case FlowKind::two_scale: {
            double s1 = std::sin(T * x.x), c1 = std::cos(T * x.x);
            double s2 = std::sin(T * x.y), c2 = std::cos(T * x.y);
            double S1 = std::sin(3 * T * x.x), C1 = std::cos(3 * T * x.x);
            double S2 = std::sin(3 * T * x.y), C2 = std::cos(3 * T * x.y);
            double t2 = T * T;
            return {-t2 * c1 * c2 - 2.7 * t2 * S1 * S2,
                    t2 * s1 * s2 + 2.7 * t2 * C1 * C2,
                    -t2 * s1 * s2 - 2.7 * t2 * C1 * C2,
                    t2 * c1 * c2 + 2.7 * t2 * S1 * S2};
        }
        case FlowKind::unsteady_cellular: {
            double a = phase_shift(t);
            double sa = std::sin(T * (x.x + a)), ca = std::cos(T * (x.x + a));
            double s2 = std::sin(T * x.y), c2 = std::cos(T * x.y);
            double t2 = T * T * uamp_;
            return {-t2 * ca * c2, t2 * sa * s2, -t2 * sa * s2, t2 * ca * c2};
        }
        default:
            throw ArgumentError("jacobian: unhandled flow kind");
    }
}

void Flow::finalize() {
    if (custom_velocity_) {
        sampled_bounds();
        return;
    }
    switch (kind_) {
        case FlowKind::zero:
            k0_ = 0.0;
            max_speed_ = 0.0;
            return;
        case FlowKind::cellular:
            max_speed_ = T;       // |V|^2 = T^2 (s1^2 c2^2 + c1^2 s2^2) <= T^2
            k0_ = T * T;          // spectral norm of DV attains 4*pi^2
            return;
        case FlowKind::shear:
            max_speed_ = 1.0;
            k0_ = T;              // max(sup|v|, sup|v'|) = 2*pi
            return;
        case FlowKind::cats_eye:
            max_speed_ = T * std::sqrt(1.0 + delta_ * delta_);
            k0_ = T * T * (1.0 + delta_);
            return;
        case FlowKind::unsteady_cellular:
            max_speed_ = T * std::fabs(uamp_);
            k0_ = T * T * std::fabs(uamp_);
            return;
        case FlowKind::kolmogorov:
            max_speed_ = std::sqrt(3.0);  // attained at x=(1/4,1/4,1/4)
            k0_ = T;                      // DV is a scaled permutation, norm 2*pi*max|cos|
            return;
        case FlowKind::abc: {
            // sup|V| sampled; DV bounded in Frobenius norm by 2*pi*sqrt(a^2+b^2+c^2)
            const int n = 96;
            double vmax = 0.0;
            for (int k = 0; k < n; ++k)
                for (int j = 0; j < n; ++j)
                    for (int i = 0; i < n; ++i) {
                        Vec3 v = velocity3({(i + 0.5) / n, (j + 0.5) / n, (k + 0.5) / n});
                        vmax = std::max(vmax, v.norm());
                    }
            max_speed_ = 1.02 * vmax;
            double jb = T * std::sqrt(abc_a_ * abc_a_ + abc_b_ * abc_b_ + abc_c_ * abc_c_);
            k0_ = std::max(max_speed_, jb);
            return;
        }
        default: {
            // sampled sup of |V| and of the finite-difference |DV| on a
            // 256-per-axis grid, with a 1.05 safety factor
            const int n = 256;
            double vmax = 0.0, jmax = 0.0;
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    Vec2 x{(i + 0.5) / n, (j + 0.5) / n};
                    vmax = std::max(vmax, velocity(x).norm());
                    jmax = std::max(jmax, spectral_norm(jacobian(x)));
                }
            max_speed_ = 1.05 * vmax;
            k0_ = 1.05 * std::max(vmax, jmax);
            return;
        }
    }
}

double lipschitz_bound(const Flow& flow) { return flow.k0(); }

// ---------------------------------------------------------------------------
// stagnation points
// ---------------------------------------------------------------------------

StagnationScan find_stagnation_points(const Flow& flow, double t,
                                      int seeds_per_axis, double tol) {
    if (flow.dim() != 2) throw ArgumentError("stagnation scan is 2D only");
    if (seeds_per_axis < 8) throw ArgumentError("seeds_per_axis must be >= 8");
    const double k0 = flow.k0();
    if (tol <= 0.0) tol = 1e-6 * k0 * k0;
    const double scale = std::max(1.0, k0);
    const double accept_res = 1e-8 * scale;
    const double merge_radius = 1e-6;

    StagnationScan scan;
    for (int j = 0; j < seeds_per_axis; ++j) {
        for (int i = 0; i < seeds_per_axis; ++i) {
            Vec2 x{(i + 0.5) / seeds_per_axis, (j + 0.5) / seeds_per_axis};
            Vec2 v = flow.velocity(x, t);
            double res = v.norm();
            bool ok = true;
            for (int it = 0; it < 50 && res > 1e-13 * scale; ++it) {
                Mat2 jm = flow.jacobian(x, t);
                double det = jm.det();
                Vec2 step;
                if (std::fabs(det) > 1e-12 * scale * scale) {
                    // Newton: J*step = -V
                    step = {(-v.x * jm.d + v.y * jm.b) / det,
                            (-v.y * jm.a + v.x * jm.c) / det};
                } else {
                    // Levenberg step for (near-)singular Jacobians
                    double g1 = jm.a * v.x + jm.c * v.y;
                    double g2 = jm.b * v.x + jm.d * v.y;
                    double a11 = jm.a * jm.a + jm.c * jm.c;
                    double a12 = jm.a * jm.b + jm.c * jm.d;
                    double a22 = jm.b * jm.b + jm.d * jm.d;
                    double lam = 1e-8 * (a11 + a22) + 1e-30;
                    a11 += lam;
                    a22 += lam;
                    double d2 = a11 * a22 - a12 * a12;
                    if (d2 == 0.0) {
                        ok = false;
                        break;
                    }
                    step = {(-g1 * a22 + g2 * a12) / d2, (-g2 * a11 + g1 * a12) / d2};
                }
                // damping: halve the step while the residual increases
                double lambda = 1.0;
                Vec2 xn = x;
                double rn = res;
                for (int halve = 0; halve < 25; ++halve) {
                    Vec2 cand = {x.x + lambda * step.x, x.y + lambda * step.y};
                    Vec2 vc = flow.velocity(cand, t);
                    if (vc.norm() <= res || halve == 24) {
                        xn = cand;
                        rn = vc.norm();
                        break;
                    }
                    lambda *= 0.5;
                }
                if (rn >= res && res > accept_res) {
                    ok = false;  // stalled away from a zero
                    break;
                }
                x = xn;
                v = flow.velocity(x, t);
                res = v.norm();
            }
            if (!ok || res > accept_res) continue;  // diverged seed: dropped
            x = wrap01(x);
            bool dup = false;
            for (const auto& p : scan.points) {
                if (torus_dist(p.location, x) < merge_radius) {
                    dup = true;
                    break;
                }
            }
            if (dup) continue;
            double det = flow.jacobian(x, t).det();
            scan.points.push_back({x, res, std::fabs(det) <= tol, det});
        }
    }

    // Continuum heuristic: many degenerate zeros forming chains (seed-spacing
    // neighbors) or falling on a common line suggest a curve or region of
    // zeros rather than isolated points.
    std::vector<Vec2> deg;
    for (const auto& p : scan.points)
        if (p.degenerate) deg.push_back(p.location);
    if (!scan.points.empty() &&
        deg.size() > 0.25 * static_cast<double>(scan.points.size()) && deg.size() >= 3) {
        double spacing = 2.5 / seeds_per_axis;
        std::size_t chained = 0;
        for (std::size_t a = 0; a < deg.size(); ++a) {
            for (std::size_t b = 0; b < deg.size(); ++b) {
                if (a != b && torus_dist(deg[a], deg[b]) < spacing) {
                    ++chained;
                    break;
                }
            }
        }
        if (chained * 2 >= deg.size()) scan.continuum_suspected = true;
    }
    return scan;
}

// ---------------------------------------------------------------------------
// structural validation
// ---------------------------------------------------------------------------

ValidationReport validate_flow(const Flow& flow) {
    ValidationReport rep;
    const double k0 = flow.k0();
    rep.div_tol = flow.lipschitz() ? 1e-6 * k0 : 1e-2 * std::max(k0, 1.0);

    if (flow.dim() == 2) {
        const int n = 256;
        const double h = 1.0 / n;
        double m1 = 0.0, m2 = 0.0, dmax = 0.0;
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                Vec2 x{i * h, j * h};
                Vec2 v = flow.velocity(x);
                m1 += v.x;
                m2 += v.y;
                double div = (flow.velocity({x.x + h, x.y}).x -
                              flow.velocity({x.x - h, x.y}).x +
                              flow.velocity({x.x, x.y + h}).y -
                              flow.velocity({x.x, x.y - h}).y) /
                             (2 * h);
                dmax = std::max(dmax, std::fabs(div));
            }
        }
        rep.mean_velocity = {m1 / (n * n), m2 / (n * n), 0.0};
        rep.max_divergence = dmax;
    } else {
        const int n = 48;
        const double h = 1.0 / n;
        double m1 = 0.0, m2 = 0.0, m3 = 0.0, dmax = 0.0;
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    Vec3 x{i * h, j * h, k * h};
                    Vec3 v = flow.velocity3(x);
                    m1 += v.x;
                    m2 += v.y;
                    m3 += v.z;
                    double div =
                        (flow.velocity3({x.x + h, x.y, x.z}).x -
                         flow.velocity3({x.x - h, x.y, x.z}).x +
                         flow.velocity3({x.x, x.y + h, x.z}).y -
                         flow.velocity3({x.x, x.y - h, x.z}).y +
                         flow.velocity3({x.x, x.y, x.z + h}).z -
                         flow.velocity3({x.x, x.y, x.z - h}).z) /
                        (2 * h);
                    dmax = std::max(dmax, std::fabs(div));
                }
        double nn = static_cast<double>(n) * n * n;
        rep.mean_velocity = {m1 / nn, m2 / nn, m3 / nn};
        rep.max_divergence = dmax;
    }

    // periodicity under unit lattice translations at sampled points
    SplitMix64 rng(12345);
    double pdef = 0.0;
    std::vector<double> times = {0.0};
    if (flow.time_dependent()) times.push_back(0.37);
    for (int s = 0; s < 64; ++s) {
        if (flow.dim() == 2) {
            Vec2 x{rng.next_double(), rng.next_double()};
            for (double t : times) {
                Vec2 v = flow.velocity(x, t);
                Vec2 vx = flow.velocity({x.x + 1.0, x.y}, t);
                Vec2 vy = flow.velocity({x.x, x.y - 1.0}, t);
                pdef = std::max(pdef, (vx - v).norm());
                pdef = std::max(pdef, (vy - v).norm());
            }
        } else {
            Vec3 x{rng.next_double(), rng.next_double(), rng.next_double()};
            Vec3 v = flow.velocity3(x);
            pdef = std::max(pdef, (flow.velocity3({x.x + 1, x.y, x.z}) - v).norm());
            pdef = std::max(pdef, (flow.velocity3({x.x, x.y + 1, x.z}) - v).norm());
            pdef = std::max(pdef, (flow.velocity3({x.x, x.y, x.z - 1}) - v).norm());
        }
    }
    rep.periodicity_defect = pdef;

    double mean_norm = std::sqrt(rep.mean_velocity[0] * rep.mean_velocity[0] +
                                 rep.mean_velocity[1] * rep.mean_velocity[1] +
                                 rep.mean_velocity[2] * rep.mean_velocity[2]);
    rep.passes = mean_norm <= rep.mean_tol && rep.max_divergence <= rep.div_tol &&
                 rep.periodicity_defect <= rep.period_tol;
    return rep;
}

}  // namespace frontlab::flows
