#include "riemcurv/curve.hpp"
#include "riemcurv/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace riemcurv {

CurveJet CurveJet::shifted(double s) const {
    const int r = order();
    const int m = dim();
    CurveJet out;
    out.t0 = t0 + s;
    out.chart_label = chart_label;
    out.coords = Mat::Zero(r + 1, m);
    // x_k(t0+s) = sum_{l>=k} x_l s^{l-k} / (l-k)!
    for (int k = 0; k <= r; ++k) {
        double pow_fact = 1.0; // s^{l-k} / (l-k)!
        for (int l = k; l <= r; ++l) {
            if (l > k) pow_fact *= s / static_cast<double>(l - k);
            out.coords.row(k) += pow_fact * coords.row(l);
        }
    }
    return out;
}

Vec CurveJet::poly_point(double s) const {
    const int r = order();
    Vec p = coords.row(0).transpose();
    double pow_fact = 1.0;
    for (int l = 1; l <= r; ++l) {
        pow_fact *= s / static_cast<double>(l);
        p += pow_fact * coords.row(l).transpose();
    }
    return p;
}

bool CurveJet::is_finite() const { return coords.allFinite(); }

CurveProvider::CurveProvider(EvalFn eval, int dim, std::string chart_label,
                             double fd_step_, int fd_points_)
    : fd_step(fd_step_), fd_points(fd_points_), eval_(std::move(eval)), dim_(dim),
      chart_label_(std::move(chart_label)) {}

CurveProvider::CurveProvider(EvalFn eval, JetFn jets, int dim, std::string chart_label,
                             bool analytic)
    : eval_(std::move(eval)), jets_(std::move(jets)), dim_(dim),
      chart_label_(std::move(chart_label)), analytic_(analytic) {}

CurveJet CurveProvider::jet(double t, int order) const {
    if (order < 0) throw Error("jet order must be >= 0");
    if (jets_) return jets_(t, order);
    if (order > 6)
        throw Error("divided-difference curve jets supported up to order 6");
    auto f = [this, t](double s) { return eval_(t + s); };
    const auto derivs =
        fd_vector_derivatives(f, order, fd_step, std::max(fd_points, order + 3));
    CurveJet out;
    out.t0 = t;
    out.chart_label = chart_label_;
    out.coords = Mat::Zero(order + 1, dim_);
    for (int k = 0; k <= order; ++k) out.coords.row(k) = derivs[k].transpose();
    return out;
}

namespace {

double param_or(const std::map<std::string, double>& p, const std::string& key,
                double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

CurveProvider analytic_curve(std::function<void(double, int, Mat&)> fill, int dim,
                             std::string label) {
    auto jets = [fill, dim](double t, int order) {
        CurveJet j;
        j.t0 = t;
        j.coords = Mat::Zero(order + 1, dim);
        Mat full = Mat::Zero(std::max(order + 1, 8), dim);
        fill(t, full.rows() - 1, full);
        j.coords = full.topRows(order + 1);
        return j;
    };
    auto eval = [fill, dim](double t) {
        Mat full = Mat::Zero(1, dim);
        fill(t, 0, full);
        return Vec(full.row(0).transpose());
    };
    return CurveProvider(eval, jets, dim, std::move(label));
}

void fill_trig(Mat& out, int col_c, int col_s, double amp, double omega, double phase,
               double t, int max_order) {
    // d^k/dt^k [amp cos(omega t + phase)], paired sine column optional (< 0: skip)
    for (int k = 0; k <= max_order; ++k) {
        const double w = std::pow(omega, k);
        const double arg = omega * t + phase + k * M_PI / 2.0;
        if (col_c >= 0) out(k, col_c) += amp * w * std::cos(arg);
        if (col_s >= 0) out(k, col_s) += amp * w * std::sin(arg);
    }
}

} // namespace

CurveProvider make_curve_preset(const std::string& name,
                                const std::map<std::string, double>& params) {
    if (name == "circle") {
        const double r = param_or(params, "r", 1.0);
        const double cx = param_or(params, "cx", 0.0);
        const double cy = param_or(params, "cy", 0.0);
        const double speed = param_or(params, "speed", 1.0);
        auto fill = [r, cx, cy, speed](double t, int max_order, Mat& out) {
            out(0, 0) = cx;
            out(0, 1) = cy;
            fill_trig(out, 0, 1, r, speed / r, 0.0, t, max_order);
        };
        return analytic_curve(fill, 2, "circle");
    }
    if (name == "plane_circle") {
        const double kappa = param_or(params, "kappa", param_or(params, "k", 1.0));
        if (kappa <= 0.0) throw ConfigError("plane_circle: kappa must be positive");
        std::map<std::string, double> p{{"r", 1.0 / kappa}};
        return make_curve_preset("circle", p);
    }
    if (name == "helix") {
        const double a = param_or(params, "a", 1.0);
        const double b = param_or(params, "b", 0.5);
        auto fill = [a, b](double t, int max_order, Mat& out) {
            fill_trig(out, 0, 1, a, 1.0, 0.0, t, max_order);
            out(0, 2) = b * t;
            if (max_order >= 1) out(1, 2) = b;
        };
        return analytic_curve(fill, 3, "helix");
    }
    if (name == "line") {
        const int m = static_cast<int>(param_or(params, "dim", 2.0));
        Vec d = Vec::Zero(m), x0 = Vec::Zero(m);
        for (int i = 0; i < m; ++i) {
            d[i] = param_or(params, "d" + std::to_string(i + 1), i == 0 ? 1.0 : 0.0);
            x0[i] = param_or(params, "x" + std::to_string(i + 1), 0.0);
        }
        auto fill = [d, x0, m](double t, int max_order, Mat& out) {
            for (int i = 0; i < m; ++i) out(0, i) = x0[i] + t * d[i];
            if (max_order >= 1)
                for (int i = 0; i < m; ++i) out(1, i) = d[i];
        };
        return analytic_curve(fill, m, "line");
    }
    if (name == "great_circle") {
        // Equator |x| = 2/sqrt(k) of the conformal sphere chart, unit speed.
        const double k = param_or(params, "k", 1.0);
        const int m = static_cast<int>(param_or(params, "dim", 2.0));
        if (k <= 0.0) throw ConfigError("great_circle: k must be positive");
        const double rho = 2.0 / std::sqrt(k);
        const double omega = std::sqrt(k);
        auto fill = [rho, omega, m](double t, int max_order, Mat& out) {
            fill_trig(out, 0, 1, rho, omega, 0.0, t, max_order);
            (void)m;
        };
        return analytic_curve(fill, m, "great_circle");
    }
    if (name == "torus_top_circle") {
        // theta = pi/2, unit speed on dtheta^2 + (2+cos theta)^2 dphi^2;
        // traversed so that the signed curvature is +1/2.
        auto fill = [](double t, int max_order, Mat& out) {
            out(0, 0) = M_PI / 2.0;
            out(0, 1) = -0.5 * t;
            if (max_order >= 1) out(1, 1) = -0.5;
        };
        return analytic_curve(fill, 2, "torus_top_circle");
    }
    throw ConfigError("unknown curve preset: " + name);
}

CurveProvider make_sampled_curve(const std::vector<double>& t,
                                 const std::vector<Vec>& points,
                                 std::string chart_label) {
    if (t.size() != points.size() || t.size() < 4)
        throw ConfigError("sampled curve needs matching t/point lists (>= 4 samples)");
    const double dt = t[1] - t[0];
    for (size_t i = 1; i < t.size(); ++i)
        if (std::abs(t[i] - t[i - 1] - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
            throw ConfigError("sampled curve requires uniform t spacing");
    const int m = static_cast<int>(points[0].size());
    const double t_begin = t.front();
    const size_t n = t.size();

    auto nearest = [t_begin, dt, n](double tt) {
        long i = std::lround((tt - t_begin) / dt);
        return std::clamp(i, 0L, static_cast<long>(n) - 1);
    };
    auto eval = [points, nearest, t_begin, dt](double tt) {
        // piecewise-linear between samples
        const long i = nearest(tt);
        const double ti = t_begin + i * dt;
        const long j = (tt >= ti && i + 1 < static_cast<long>(points.size())) ? i + 1
                       : (i > 0 ? i - 1 : i + 1);
        const double tj = t_begin + j * dt;
        if (i == j) return points[i];
        const double a = (tt - ti) / (tj - ti);
        return Vec((1.0 - a) * points[i] + a * points[j]);
    };
    auto jets = [points, nearest, t_begin, dt, m, n](double tt, int order) {
        const int half = std::max(order + 2, 4);
        long c = nearest(tt);
        c = std::clamp(c, static_cast<long>(half), static_cast<long>(n) - 1 - half);
        const int w = 2 * half + 1;
        Vec nodes(w);
        for (int q = 0; q < w; ++q) nodes[q] = t_begin + (c - half + q) * dt - tt;
        CurveJet out;
        out.t0 = tt;
        out.coords = Mat::Zero(order + 1, m);
        for (int k = 0; k <= order; ++k) {
            const Vec wts = fd_weights(0.0, nodes, k);
            for (int q = 0; q < w; ++q)
                out.coords.row(k) += wts[q] * points[c - half + q].transpose();
        }
        return out;
    };
    return CurveProvider(eval, jets, m, std::move(chart_label), /*analytic=*/false);
}

CurveProvider load_curve_csv(const std::string& path, std::string chart_label) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open curve file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty curve file");
    std::vector<double> ts;
    std::vector<Vec> pts;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::vector<double> row;
        while (std::getline(ss, tok, ',')) row.push_back(std::stod(tok));
        if (row.size() < 2) throw ConfigError("curve rows need t and coordinates");
        ts.push_back(row[0]);
        Vec p(static_cast<int>(row.size()) - 1);
        for (size_t i = 1; i < row.size(); ++i) p[static_cast<int>(i) - 1] = row[i];
        pts.push_back(p);
    }
    return make_sampled_curve(ts, pts, std::move(chart_label));
}

CurveProvider composed_curve(const CurveProvider& base,
                             const std::function<Vec(const Vec&)>& map, int dim,
                             double fd_step, int fd_points) {
    auto eval = [base, map](double t) { return map(base(t)); };
    return CurveProvider(eval, dim, base.chart_label(), fd_step, fd_points);
}

} // namespace riemcurv
