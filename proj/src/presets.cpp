#include "riemcurv/presets.hpp"
#include "riemcurv/errors.hpp"
#include "riemcurv/invariants.hpp"

#include <cmath>
#include <random>

namespace riemcurv {

namespace {

double param_or(const std::map<std::string, double>& p, const std::string& key,
                double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

int int_param(const std::map<std::string, double>& p, const std::string& key,
              int fallback) {
    return static_cast<int>(std::lround(param_or(p, key, fallback)));
}

Preset make_euclidean(const std::map<std::string, double>& params) {
    const int m = int_param(params, "m", int_param(params, "dim", 2));
    if (m < 1 || m > 6) throw ConfigError("euclidean: m must be in 1..6");
    Preset p;
    p.name = "euclidean";
    p.params = {{"m", static_cast<double>(m)}};
    auto g = [m](const Vec&) { return Mat::Identity(m, m); };
    auto dg = [m](const Vec&) { return std::vector<Mat>(m, Mat::Zero(m, m)); };
    p.chart = MetricChart(m, Box::cube(m, 10.0), g, dg, +1.0, "euclidean");
    for (int h = 0; h < m; ++h) {
        p.killing.push_back([m, h](const Vec&) {
            Vec v = Vec::Zero(m);
            v[h] = 1.0;
            return v;
        });
        p.killing_labels.push_back("T" + std::to_string(h + 1));
    }
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            p.killing.push_back([m, i, j](const Vec& x) {
                Vec v = Vec::Zero(m);
                v[i] = x[j];
                v[j] = -x[i];
                return v;
            });
            p.killing_labels.push_back("R" + std::to_string(i + 1) + std::to_string(j + 1));
        }
    p.probe = [m](const Vec& x) {
        Vec v = Vec::Zero(m);
        v[0] = x[0];
        return v;
    };
    p.probe_label = "x1 d/dx1";
    p.constant_curvature = 0.0;
    if (m == 2) p.gaussian_curvature = [](const Vec&) { return 0.0; };
    return p;
}

Preset make_space_form(const std::map<std::string, double>& params, bool hyperbolic) {
    const double k = param_or(params, "k", hyperbolic ? -1.0 : 1.0);
    const int m = int_param(params, "m", int_param(params, "dim", 2));
    if (!hyperbolic && k <= 0.0) throw ConfigError("sphere: k must be positive");
    if (hyperbolic && k >= 0.0) throw ConfigError("hyperbolic: k must be negative");
    if (m < 2 || m > 4)
        throw ConfigError(std::string(hyperbolic ? "hyperbolic" : "sphere") +
                          ": m must be in 2..4");
    Preset p;
    p.name = hyperbolic ? "hyperbolic" : "sphere";
    p.params = {{"k", k}, {"m", static_cast<double>(m)}};

    // Conformal chart g_ij = delta_ij / W^2, W = 1 + (k/4)|x|^2.
    auto W = [k](const Vec& x) { return 1.0 + 0.25 * k * x.squaredNorm(); };
    auto g = [m, W](const Vec& x) {
        const double w = W(x);
        return Mat(Mat::Identity(m, m) / (w * w));
    };
    auto dg = [m, k, W](const Vec& x) {
        const double w3 = std::pow(W(x), 3);
        std::vector<Mat> out(m);
        for (int pidx = 0; pidx < m; ++pidx)
            out[pidx] = Mat(-k * x[pidx] / w3 * Mat::Identity(m, m));
        return out;
    };
    const double half = hyperbolic ? 0.9 * 2.0 / std::sqrt(-k * m) : 4.0 / std::sqrt(k);
    p.chart = MetricChart(m, Box::cube(m, half), g, dg, +1.0, p.name);

    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            p.killing.push_back([m, i, j](const Vec& x) {
                Vec v = Vec::Zero(m);
                v[i] = x[j];
                v[j] = -x[i];
                return v;
            });
            p.killing_labels.push_back("R" + std::to_string(i + 1) + std::to_string(j + 1));
        }
    for (int i = 0; i < m; ++i) {
        p.killing.push_back([m, i, k](const Vec& x) {
            Vec v = Vec::Constant(m, 0.0);
            const double c = 1.0 - 0.25 * k * x.squaredNorm();
            for (int a = 0; a < m; ++a) v[a] = 0.5 * k * x[i] * x[a];
            v[i] += c;
            return v;
        });
        p.killing_labels.push_back("V" + std::to_string(i + 1));
    }
    p.probe = [m](const Vec& x) {
        Vec v = Vec::Zero(m);
        v[0] = x[0];
        return v;
    };
    p.probe_label = "x1 d/dx1";
    p.constant_curvature = k;
    if (m == 2) p.gaussian_curvature = [k](const Vec&) { return k; };
    return p;
}

Preset make_torus(const std::map<std::string, double>& params) {
    // Example-1 torus is fixed: tube radius 1 around a radius-2 circle.
    for (const auto& [key, value] : params) {
        (void)value;
        if (key != "m" && key != "dim")
            throw ConfigError("torus_example1 takes no parameters (got '" + key + "')");
    }
    Preset p;
    p.name = "torus_example1";
    // Intrinsic chart (theta, phi): g = dtheta^2 + (2 + cos theta)^2 dphi^2.
    auto g = [](const Vec& x) {
        Mat out = Mat::Identity(2, 2);
        const double f = 2.0 + std::cos(x[0]);
        out(1, 1) = f * f;
        return out;
    };
    auto dg = [](const Vec& x) {
        std::vector<Mat> out(2, Mat::Zero(2, 2));
        const double f = 2.0 + std::cos(x[0]);
        out[0](1, 1) = -2.0 * f * std::sin(x[0]);
        return out;
    };
    p.chart = MetricChart(2, Box::cube(2, 8.0), g, dg, +1.0, "torus_example1");
    p.killing.push_back([](const Vec&) {
        Vec v(2);
        v << 0.0, 1.0;
        return v;
    });
    p.killing_labels.push_back("d/dphi");
    p.probe = [](const Vec&) {
        Vec v(2);
        v << 1.0, 0.0;
        return v;
    };
    p.probe_label = "d/dtheta";
    p.gaussian_curvature = [](const Vec& x) {
        return std::cos(x[0]) / (2.0 + std::cos(x[0]));
    };
    return p;
}

Preset make_g_kappa_tau(const std::map<std::string, double>& params) {
    const double kappa = param_or(params, "kappa", 1.0);
    const double tau = param_or(params, "tau", 0.5);
    if (kappa == 0.0 && tau == 0.0)
        throw ConfigError("g_kappa_tau: (kappa, tau) = (0, 0) is the flat case; "
                          "use the euclidean preset");
    Preset p;
    p.name = "g_kappa_tau";
    p.params = {{"kappa", kappa}, {"tau", tau}};

    auto Wf = [kappa](double x, double y) { return 1.0 + 0.25 * kappa * (x * x + y * y); };
    auto omega = [tau, Wf](const Vec& q) {
        Vec w(3);
        const double lam = 1.0 / Wf(q[0], q[1]);
        w << tau * lam * q[1], -tau * lam * q[0], 1.0;
        return w;
    };
    auto g = [Wf, omega](const Vec& q) {
        const double lam = 1.0 / Wf(q[0], q[1]);
        Mat base = Mat::Zero(3, 3);
        base(0, 0) = base(1, 1) = lam * lam;
        const Vec w = omega(q);
        return Mat(base + w * w.transpose());
    };
    auto dg = [kappa, tau, Wf, omega](const Vec& q) {
        const double x = q[0], y = q[1];
        const double W = Wf(x, y);
        const double lam = 1.0 / W;
        const double lam_x = -lam * lam * 0.5 * kappa * x;
        const double lam_y = -lam * lam * 0.5 * kappa * y;
        const Vec w = omega(q);
        // dw[p][i] = d omega_i / d x^p
        Mat dw = Mat::Zero(3, 3);
        dw(0, 0) = tau * lam_x * y;
        dw(1, 0) = tau * (lam + lam_y * y);
        dw(0, 1) = -tau * (lam + lam_x * x);
        dw(1, 1) = -tau * lam_y * x;
        std::vector<Mat> out(3, Mat::Zero(3, 3));
        for (int pidx = 0; pidx < 2; ++pidx) {
            const double dlam2 = 2.0 * lam * (pidx == 0 ? lam_x : lam_y);
            Mat d = Mat::Zero(3, 3);
            d(0, 0) = d(1, 1) = dlam2;
            d += dw.row(pidx).transpose() * w.transpose() + w * dw.row(pidx);
            out[pidx] = d;
        }
        return out;
    };
    double half = 3.0;
    if (kappa < 0.0) half = 0.9 * 2.0 / std::sqrt(-2.0 * kappa);
    Box box = Box::cube(3, half);
    box.lo[2] = -4.0;
    box.hi[2] = 4.0;
    p.chart = MetricChart(3, box, g, dg, +1.0, "g_kappa_tau");

    p.killing.push_back([kappa, tau](const Vec& q) {
        Vec v(3);
        v << -2.0 * kappa * q[0] * q[1],
            kappa * q[0] * q[0] - kappa * q[1] * q[1] - 4.0, 4.0 * tau * q[0];
        return v;
    });
    p.killing_labels.push_back("X1");
    p.killing.push_back([kappa, tau](const Vec& q) {
        Vec v(3);
        v << kappa * q[0] * q[0] - kappa * q[1] * q[1] + 4.0,
            2.0 * kappa * q[0] * q[1], 4.0 * tau * q[1];
        return v;
    });
    p.killing_labels.push_back("X2");
    p.killing.push_back([](const Vec& q) {
        Vec v(3);
        v << -q[1], q[0], 0.0;
        return v;
    });
    p.killing_labels.push_back("X3");
    p.killing.push_back([](const Vec&) {
        Vec v(3);
        v << 0.0, 0.0, 1.0;
        return v;
    });
    p.killing_labels.push_back("Z");
    p.probe = [](const Vec& q) {
        Vec v(3);
        v << q[0], 0.0, 0.0;
        return v;
    };
    p.probe_label = "x d/dx";
    if (std::abs(kappa - 4.0 * tau * tau) < 1e-12) p.constant_curvature = tau * tau;
    p.expected_rank_d1 = 4;
    return p;
}

Preset make_solvable(const std::map<std::string, double>& params) {
    const double nu = param_or(params, "nu", 1.0);
    const double mu = param_or(params, "mu", 0.0);
    if (nu <= 0.0) throw ConfigError("solvable_group: nu must be positive");
    if (mu != 0.0)
        throw ConfigError("solvable_group: only the diagonal metric family is "
                          "shipped (mu must be 0)");
    Preset p;
    p.name = "solvable_group";
    p.params = {{"nu", nu}};
    // omega_1 = exp(-z) dx, omega_2 = exp(z) dy, omega_3 = dz;
    // g = omega_1^2 + omega_2^2 + nu omega_3^2.
    auto g = [nu](const Vec& q) {
        Mat out = Mat::Zero(3, 3);
        out(0, 0) = std::exp(-2.0 * q[2]);
        out(1, 1) = std::exp(2.0 * q[2]);
        out(2, 2) = nu;
        return out;
    };
    auto dg = [](const Vec& q) {
        std::vector<Mat> out(3, Mat::Zero(3, 3));
        out[2](0, 0) = -2.0 * std::exp(-2.0 * q[2]);
        out[2](1, 1) = 2.0 * std::exp(2.0 * q[2]);
        return out;
    };
    p.chart = MetricChart(3, Box::cube(3, 2.5), g, dg, +1.0, "solvable_group");
    p.killing.push_back([](const Vec&) {
        Vec v(3);
        v << 1.0, 0.0, 0.0;
        return v;
    });
    p.killing_labels.push_back("Y1");
    p.killing.push_back([](const Vec&) {
        Vec v(3);
        v << 0.0, 1.0, 0.0;
        return v;
    });
    p.killing_labels.push_back("Y2");
    p.killing.push_back([](const Vec& q) {
        Vec v(3);
        v << q[0], -q[1], 1.0;
        return v;
    });
    p.killing_labels.push_back("Y3");
    p.probe = [](const Vec& q) {
        Vec v(3);
        v << q[0], 0.0, 0.0;
        return v;
    };
    p.probe_label = "x d/dx";
    return p;
}

Preset make_bump(const std::map<std::string, double>& params) {
    const int m = int_param(params, "m", int_param(params, "dim", 2));
    if (m < 2 || m > 4) throw ConfigError("bump_example2: m must be in 2..4");
    Preset p;
    p.name = "bump_example2";
    p.params = {{"m", static_cast<double>(m)}};
    // g_ij = delta_ij + h(|x|), h(s) = exp(-1/s^2), h(0) = 0.
    auto h = [](double s) { return s > 1e-8 ? std::exp(-1.0 / (s * s)) : 0.0; };
    auto hp = [h](double s) {
        return s > 1e-8 ? 2.0 / (s * s * s) * h(s) : 0.0;
    };
    auto g = [m, h](const Vec& x) {
        return Mat(Mat::Identity(m, m) + h(x.norm()) * Mat::Ones(m, m));
    };
    auto dg = [m, hp](const Vec& x) {
        const double rho = x.norm();
        std::vector<Mat> out(m, Mat::Zero(m, m));
        if (rho < 1e-8) return out;
        const double c = hp(rho) / rho;
        for (int pidx = 0; pidx < m; ++pidx) out[pidx] = Mat(c * x[pidx] * Mat::Ones(m, m));
        return out;
    };
    p.chart = MetricChart(m, Box::cube(m, 2.0), g, dg, +1.0, "bump_example2");
    p.probe = [m](const Vec& x) {
        Vec v = Vec::Zero(m);
        v[0] = x[1];
        v[1] = -x[0];
        return v;
    };
    p.probe_label = "rotation (not Killing here)";
    return p;
}

Preset make_perturbed_surface(const std::map<std::string, double>& params) {
    const double eps = param_or(params, "eps", 0.05);
    const uint64_t seed = static_cast<uint64_t>(param_or(params, "seed", 1.0));
    if (eps < 0.0 || eps > 0.5)
        throw ConfigError("perturbed_surface: eps must be in [0, 0.5]");
    Preset p;
    p.name = "perturbed_surface";
    p.params = {{"eps", eps}, {"seed", static_cast<double>(seed)}};

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(0.5, 1.0), freq(0.6, 1.4), phase(0.0, 6.28);
    struct Term {
        double a, alpha, beta, delta;
    };
    std::vector<Term> terms(3);
    for (auto& t : terms) t = {amp(rng), freq(rng), freq(rng), phase(rng)};

    // Conformal metric exp(2 phi) (dx^2 + dy^2), phi a small trig polynomial;
    // K = -exp(-2 phi) Laplacian(phi) in closed form.
    auto phi = [terms, eps](double x, double y) {
        double s = 0.0;
        for (const auto& t : terms) s += t.a * std::sin(t.alpha * x + t.beta * y + t.delta);
        return eps * s;
    };
    auto dphi = [terms, eps](double x, double y) {
        Vec d = Vec::Zero(2);
        for (const auto& t : terms) {
            const double c = t.a * std::cos(t.alpha * x + t.beta * y + t.delta);
            d[0] += t.alpha * c;
            d[1] += t.beta * c;
        }
        return Vec(eps * d);
    };
    auto lap_phi = [terms, eps](double x, double y) {
        double s = 0.0;
        for (const auto& t : terms)
            s -= (t.alpha * t.alpha + t.beta * t.beta) * t.a *
                 std::sin(t.alpha * x + t.beta * y + t.delta);
        return eps * s;
    };
    auto g = [phi](const Vec& q) {
        return Mat(std::exp(2.0 * phi(q[0], q[1])) * Mat::Identity(2, 2));
    };
    auto dg = [phi, dphi](const Vec& q) {
        const double e2 = std::exp(2.0 * phi(q[0], q[1]));
        const Vec d = dphi(q[0], q[1]);
        std::vector<Mat> out(2);
        out[0] = Mat(2.0 * d[0] * e2 * Mat::Identity(2, 2));
        out[1] = Mat(2.0 * d[1] * e2 * Mat::Identity(2, 2));
        return out;
    };
    p.chart = MetricChart(2, Box::cube(2, 3.0), g, dg, +1.0, "perturbed_surface");
    p.gaussian_curvature = [phi, lap_phi](const Vec& q) {
        return -std::exp(-2.0 * phi(q[0], q[1])) * lap_phi(q[0], q[1]);
    };
    p.probe = [](const Vec& q) {
        Vec v(2);
        v << q[0], 0.0;
        return v;
    };
    p.probe_label = "x d/dx";
    return p;
}

} // namespace

Preset load_preset(const std::string& name, const std::map<std::string, double>& params) {
    if (name == "euclidean") return make_euclidean(params);
    if (name == "sphere") return make_space_form(params, false);
    if (name == "hyperbolic") return make_space_form(params, true);
    if (name == "torus_example1") return make_torus(params);
    if (name == "g_kappa_tau") return make_g_kappa_tau(params);
    if (name == "solvable_group") return make_solvable(params);
    if (name == "bump_example2") return make_bump(params);
    if (name == "perturbed_surface") return make_perturbed_surface(params);
    throw ConfigError("unknown preset: " + name);
}

std::vector<PresetSchema> preset_schemas() {
    return {
        {"euclidean", "m (dimension, 1..6)", "flat metric; m translations + m(m-1)/2 rotations"},
        {"sphere", "k > 0, m (2..4)", "conformal chart of constant curvature k"},
        {"hyperbolic", "k < 0, m (2..4)", "conformal chart of constant curvature k"},
        {"torus_example1", "(none)", "dtheta^2 + (2+cos theta)^2 dphi^2; K = cos theta/(2+cos theta)"},
        {"g_kappa_tau", "kappa, tau", "homogeneous 3-manifold fibred over a constant-curvature "
                                      "surface; 4 Killing fields X1, X2, X3, Z"},
        {"solvable_group", "nu > 0 (mu=0 only)", "R^2 x| R with omega_1 = exp(-z) dx, "
                                                 "omega_2 = exp(z) dy, omega_3 = dz"},
        {"bump_example2", "m (2..4)", "delta_ij + exp(-|x|^-2); flat to infinite order at 0 only"},
        {"perturbed_surface", "eps, seed", "seeded conformal trig perturbation of the plane"},
    };
}

bool SelfCheckReport::all_pass() const {
    for (const auto& item : items)
        if (!item.pass) return false;
    return true;
}

SelfCheckReport preset_selfcheck(const std::string& name,
                                 const std::map<std::string, double>& params) {
    const Preset p = load_preset(name, params);
    SelfCheckReport rep;
    rep.preset = name;
    auto add = [&rep](const std::string& label, bool pass, double value, double thr) {
        rep.items.push_back({label, pass, value, thr});
    };

    const double kill_tol = 1e-7;
    for (size_t i = 0; i < p.killing.size(); ++i) {
        const double res = killing_residual(p.chart, p.killing[i], 5, 0.15 * 3.0);
        add("killing_residual[" + p.killing_labels[i] + "]", res < kill_tol, res, kill_tol);
    }
    if (p.probe) {
        const double res = killing_residual(p.chart, p.probe, 3, 0.15 * 3.0);
        add("probe_not_killing[" + p.probe_label + "]", res > 100.0 * kill_tol, res,
            100.0 * kill_tol);
    }

    // dg self-consistency against central differences.
    if (p.chart.has_analytic_partials()) {
        std::mt19937_64 rng(7);
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            Vec x(p.chart.dim());
            for (int i = 0; i < p.chart.dim(); ++i) {
                std::uniform_real_distribution<double> u(p.chart.domain().lo[i] * 0.4,
                                                         p.chart.domain().hi[i] * 0.4);
                x[i] = u(rng);
            }
            const auto da = p.chart.metric_partials(x);
            const double h = 1e-5;
            Vec xs = x;
            for (int k = 0; k < p.chart.dim(); ++k) {
                xs[k] = x[k] + h;
                const Mat gp = p.chart.metric(xs);
                xs[k] = x[k] - h;
                const Mat gm = p.chart.metric(xs);
                xs[k] = x[k];
                worst = std::max(worst,
                                 ((gp - gm) / (2.0 * h) - da[k]).cwiseAbs().maxCoeff());
            }
        }
        add("analytic_partials_consistency", worst < 1e-6, worst, 1e-6);
    }

    if (p.constant_curvature) {
        const double k = *p.constant_curvature;
        std::mt19937_64 rng(11);
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            Vec x(p.chart.dim());
            for (int i = 0; i < p.chart.dim(); ++i) {
                std::uniform_real_distribution<double> u(p.chart.domain().lo[i] * 0.3,
                                                         p.chart.domain().hi[i] * 0.3);
                x[i] = u(rng);
            }
            const CurvatureValue cv = riemann(p.chart, x, 0);
            const Mat g = p.chart.metric(x);
            std::mt19937_64 rv(trial);
            std::uniform_real_distribution<double> u(-1.0, 1.0);
            Vec a(p.chart.dim()), b(p.chart.dim()), c(p.chart.dim());
            for (int i = 0; i < p.chart.dim(); ++i) {
                a[i] = u(rv);
                b[i] = u(rv);
                c[i] = u(rv);
            }
            const Vec lhs = curvature_operator(cv.r, a, b, c);
            const Vec rhs = k * ((b.dot(g * c)) * a - (a.dot(g * c)) * b);
            worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
        }
        add("constant_curvature_identity", worst < 1e-7, worst, 1e-7);
    }

    if (p.name == "torus_example1") {
        Vec top(2);
        top << M_PI / 2.0, 0.0;
        const double kval = std::abs(p.gaussian_curvature(top));
        add("gaussian_curvature_zero_on_top_circle", kval < 1e-12, kval, 1e-12);
        const double dk = std::abs((p.gaussian_curvature(Vec(top.array() + 1e-5)) -
                                    p.gaussian_curvature(Vec(top.array() - 1e-5))) /
                                   2e-5);
        add("gaussian_curvature_gradient_nonzero", dk > 0.1, dk, 0.1);
    }

    if (p.name == "bump_example2") {
        const int m = p.chart.dim();
        const Vec origin = Vec::Zero(m);
        const CurvatureValue cv = riemann(p.chart, origin, 2);
        double worst = 0.0;
        for (const auto& stack : cv.nablaR) worst = std::max(worst, stack.max_abs());
        add("flat_to_order_2_at_origin", worst < 1e-6, worst, 1e-6);

        const double t = 0.3;
        const Vec xt = Vec::Constant(m, t);
        const CurvatureValue cvt = riemann(p.chart, xt, 0);
        const double observed = std::abs(cvt.r.at({1, 0, 1, 0})); // R^2_{121}
        add("curvature_nonzero_at_xt", observed > 1e-3, observed, 1e-3);
        // closed form at x_t = (t,..,t): |R^j_{iji}| = (h'/2s)(2+mh)/(1+mh)
        const double s = xt.norm();
        const double hv = std::exp(-1.0 / (s * s));
        const double hp = 2.0 / (s * s * s) * hv;
        const double closed_form = 0.5 * hp / s * (2.0 + m * hv) / (1.0 + m * hv);
        add("curvature_matches_closed_form", std::abs(observed - closed_form) < 2e-4,
            std::abs(observed - closed_form), 2e-4);
    }

    if (p.expected_rank_d1 > 0) {
        const RankEstimate est = estimate_distribution_rank(p, 1, 60, 20240);
        add("rank_D1", est.modal_rank == p.expected_rank_d1 && est.stability >= 0.95,
            static_cast<double>(est.modal_rank), static_cast<double>(p.expected_rank_d1));
    }
    return rep;
}

} // namespace riemcurv
