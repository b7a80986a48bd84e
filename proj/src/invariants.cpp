#include "riemcurv/invariants.hpp"
#include "riemcurv/errors.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <map>
#include <thread>

namespace riemcurv {

JetFunction total_derivative(const JetFunction& f, double fd_step) {
    JetFunction out;
    out.arity = f.arity + 1;
    out.label = "Dt(" + f.label + ")";
    const int r = f.arity;
    out.eval = [f, r, fd_step](const CurveJet& jet) {
        if (jet.order() < r + 1)
            throw Error("total_derivative: jet order " + std::to_string(jet.order()) +
                        " < " + std::to_string(r + 1));
        CurveJet sub;
        sub.t0 = jet.t0;
        sub.chart_label = jet.chart_label;
        sub.coords = jet.coords.topRows(r + 1);

        auto df = [&](double& slot, double plus) {
            const double orig = slot;
            slot = orig + fd_step;
            const double fp = f.eval(sub);
            slot = orig - fd_step;
            const double fm = f.eval(sub);
            slot = orig;
            return plus * (fp - fm) / (2.0 * fd_step);
        };
        double acc = df(sub.t0, 1.0);
        for (int k = 0; k <= r; ++k)
            for (int i = 0; i < jet.dim(); ++i)
                acc += df(sub.coords(k, i), 1.0) * jet.coords(k + 1, i);
        return acc;
    };
    return out;
}

JetFunction dt_iterated(const JetFunction& f, int n) {
    if (n == 0) return f;
    JetFunction out;
    out.arity = f.arity + n;
    out.label = "Dt^" + std::to_string(n) + "(" + f.label + ")";
    const int base_arity = f.arity;
    out.eval = [f, n, base_arity](const CurveJet& jet) {
        if (jet.order() < base_arity + n)
            throw Error("dt_iterated: jet order insufficient");
        auto g = [&](double s) {
            CurveJet sh = jet.shifted(s);
            CurveJet sub;
            sub.t0 = sh.t0;
            sub.chart_label = sh.chart_label;
            sub.coords = sh.coords.topRows(base_arity + 1);
            return f.eval(sub);
        };
        const double h = 0.02 / (1.0 + jet.coords.row(1).norm());
        return fd_derivatives(g, n, h, 2 * n + 7)[n];
    };
    return out;
}

JetFunction kappa_function(const MetricChart& chart, int i) {
    const int m = chart.dim();
    JetFunction out;
    out.arity = (i == m - 1) ? m : i + 1;
    out.label = "kappa_" + std::to_string(i);
    out.eval = [&chart, i, m](const CurveJet& jet) {
        if (i == m - 1) return frenet_result(chart, jet).kappas[i];
        const auto chain = covariant_chain(chart, jet, i + 1);
        const Vec deltas = gram_determinants(chart, jet.point(), chain);
        if (i == 0) return std::sqrt(deltas[0]);
        const double dm1 = (i - 1 == 0) ? 1.0 : deltas[i - 2];
        return std::sqrt(dm1 * deltas[i]) / (std::sqrt(deltas[0]) * deltas[i - 1]);
    };
    return out;
}

ProlongedField prolong(const VectorFieldFn& field, int order, int dim) {
    ProlongedField out;
    out.order = order;
    out.dim = dim;
    out.eval = [field, order, dim](const CurveJet& jet) {
        if (jet.order() < order)
            throw Error("prolong: jet order below prolongation order");
        double h = 0.15 / (1.0 + jet.coords.row(1).norm());
        const int points = 2 * order + 5;
        auto f = [&](double s) { return field(jet.poly_point(s)); };
        const auto derivs = fd_vector_derivatives(f, order, h, points);
        Mat slots(order + 1, dim);
        for (int j = 0; j <= order; ++j) slots.row(j) = derivs[j].transpose();
        return slots;
    };
    return out;
}

int distribution_rank(const std::vector<VectorFieldFn>& fields, int dim,
                      const CurveJet& jet, int r, double tol) {
    const int cols = (r + 1) * dim;
    Mat stacked(static_cast<int>(fields.size()), cols);
    for (size_t q = 0; q < fields.size(); ++q) {
        const Mat slots = prolong(fields[q], r, dim).eval(jet);
        for (int j = 0; j <= r; ++j)
            stacked.block(static_cast<int>(q), j * dim, 1, dim) = slots.row(j);
    }
    return numerical_rank(stacked, tol);
}

CurveJet random_jet(const Preset& preset, int order, std::mt19937_64& rng,
                    bool require_frenet) {
    const int m = preset.chart.dim();
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int attempt = 0; attempt < 400; ++attempt) {
        CurveJet jet;
        jet.t0 = 0.25 * u(rng);
        jet.chart_label = preset.chart.label();
        jet.coords = Mat::Zero(order + 1, m);
        for (int i = 0; i < m; ++i) {
            const double lo = preset.chart.domain().lo[i];
            const double hi = preset.chart.domain().hi[i];
            jet.coords(0, i) = 0.5 * (lo + hi) + 0.3 * (hi - lo) * 0.5 * u(rng);
        }
        for (int k = 1; k <= order; ++k)
            for (int i = 0; i < m; ++i) jet.coords(k, i) = u(rng);
        if (jet.coords.row(1).norm() < 0.3) continue;
        if (require_frenet) {
            if (jet.order() < m - 1) throw Error("random_jet: order < m-1 with Frenet filter");
            try {
                if (frenet_margin(preset.chart, jet) < 1e-4) continue;
            } catch (const Error&) {
                continue;
            }
        }
        return jet;
    }
    throw Error("random_jet: no admissible jet found (degenerate sampling box?)");
}

RankEstimate estimate_distribution_rank(const Preset& preset, int r, int samples,
                                        uint64_t seed, int threads) {
    std::mt19937_64 rng(seed);
    std::vector<CurveJet> jets;
    jets.reserve(samples);
    for (int s = 0; s < samples; ++s)
        jets.push_back(random_jet(preset, std::max(r, 1), rng, false));

    std::vector<int> ranks(samples, 0);
    if (preset.killing.empty()) {
        // empty basis: rank 0 everywhere
    } else if (threads <= 1) {
        for (int s = 0; s < samples; ++s)
            ranks[s] = distribution_rank(preset.killing, preset.chart.dim(), jets[s], r);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int q = 0; q < threads; ++q)
            pool.emplace_back([&]() {
                int s;
                while ((s = next.fetch_add(1)) < samples)
                    ranks[s] =
                        distribution_rank(preset.killing, preset.chart.dim(), jets[s], r);
            });
        for (auto& th : pool) th.join();
    }
    std::map<int, int> histogram;
    for (int s = 0; s < samples; ++s) ++histogram[ranks[s]];
    RankEstimate est;
    int best = 0;
    for (const auto& [rank, count] : histogram)
        if (count > best) {
            best = count;
            est.modal_rank = rank;
        }
    est.stability = samples > 0 ? static_cast<double>(best) / samples : 0.0;
    est.n_r = preset.chart.dim() * (r + 1) + 1 - est.modal_rank;
    return est;
}

std::vector<CountsRow> stability_and_counts(const Preset& preset, int r_max, int samples,
                                            uint64_t seed, int threads) {
    std::vector<CountsRow> rows;
    std::vector<int> k;
    for (int r = 0; r <= r_max; ++r) {
        const RankEstimate est =
            estimate_distribution_rank(preset, r, samples, seed + r, threads);
        int kr = est.n_r - 1;
        for (int i = 0; i < r; ++i) kr -= (r + 1 - i) * k[i];
        k.push_back(kr);
        rows.push_back({r, est.modal_rank, est.stability, est.n_r, kr,
                        est.stability < 0.95});
    }
    return rows;
}

double invariance_check(const JetFunction& f, const std::vector<VectorFieldFn>& fields,
                        int dim, const std::vector<CurveJet>& jets) {
    double worst = 0.0;
    for (const auto& jet : jets) {
        if (jet.order() < f.arity) throw Error("invariance_check: jet order < arity");
        CurveJet sub;
        sub.t0 = jet.t0;
        sub.chart_label = jet.chart_label;
        sub.coords = jet.coords.topRows(f.arity + 1);
        for (const auto& field : fields) {
            const Mat v = prolong(field, f.arity, dim).eval(sub);
            const double vnorm = v.norm();
            if (vnorm < 1e-14) continue;
            // five-point directional stencil; tolerant of evaluation noise in
            // f (e.g. when f itself is a divided-difference construction)
            const double h = 3e-4 * (1.0 + sub.coords.norm()) / vnorm;
            auto at = [&](double s) {
                CurveJet j = sub;
                j.coords += s * v;
                return f.eval(j);
            };
            const double d = (at(-2.0 * h) - 8.0 * at(-h) + 8.0 * at(h) -
                              at(2.0 * h)) /
                             (12.0 * h);
            worst = std::max(worst, std::abs(d));
        }
    }
    return worst;
}

namespace {

// dK and the g-Hessian of K by divided differences of the scalar field.
Vec gradient_fd(const std::function<double(const Vec&)>& f, const Vec& x, double h) {
    const int m = static_cast<int>(x.size());
    Vec g(m);
    Vec xs = x;
    for (int i = 0; i < m; ++i) {
        xs[i] = x[i] + h;
        const double fp = f(xs);
        xs[i] = x[i] - h;
        const double fm = f(xs);
        xs[i] = x[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

Mat hessian_fd(const std::function<double(const Vec&)>& f, const Vec& x, double h) {
    const int m = static_cast<int>(x.size());
    Mat out(m, m);
    const double f0 = f(x);
    Vec xs = x;
    for (int i = 0; i < m; ++i) {
        xs[i] = x[i] + h;
        const double fp = f(xs);
        xs[i] = x[i] - h;
        const double fm = f(xs);
        xs[i] = x[i];
        out(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
    }
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            xs[i] = x[i] + h;
            xs[j] = x[j] + h;
            const double fpp = f(xs);
            xs[j] = x[j] - h;
            const double fpm = f(xs);
            xs[i] = x[i] - h;
            const double fmm = f(xs);
            xs[j] = x[j] + h;
            const double fmp = f(xs);
            xs[i] = x[i];
            xs[j] = x[j];
            out(i, j) = out(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
        }
    return out;
}

std::function<double(const Vec&)> sectional_curvature_2d(const MetricChart& chart) {
    return [&chart](const Vec& x) {
        const CurvatureValue cv = riemann(chart, x, 0);
        const Mat g = chart.metric(x);
        // K = R4(e1, e2, e1, e2) / det g
        return cv.r4_at(0, 1, 0, 1) / g.determinant();
    };
}

} // namespace

Vec surface_invariants(const MetricChart& chart, const CurveJet& jet,
                       std::function<double(const Vec&)> gaussian_curvature) {
    if (chart.dim() != 2) throw Error("surface_invariants: chart must be 2-dimensional");
    if (jet.order() < 1) throw Error("surface_invariants: jet order >= 1 required");
    const Vec x = jet.point();
    const Vec T = jet.velocity();
    const Mat g = chart.metric(x);
    const double i1 = T.dot(g * T);
    if (i1 < 1e-20) throw NotFrenetError("surface_invariants: non-immersive jet", 1);

    if (!gaussian_curvature) gaussian_curvature = sectional_curvature_2d(chart);
    const FrenetFrame ff = frenet_frame(chart, x, {T});
    const Vec dK = gradient_fd(gaussian_curvature, x, 1e-4);
    const Mat hK = hessian_fd(gaussian_curvature, x, 1e-3);
    const ChristoffelValue gam = christoffel(chart, x);

    Vec out(4);
    out[0] = i1;
    out[1] = dK.dot(ff.frame.col(0));
    out[2] = dK.dot(ff.frame.col(1));
    const Vec x1 = ff.frame.col(0);
    out[3] = x1.dot(hK * x1) - dK.dot(gam.contract(x1, x1));
    return out;
}

std::vector<JetFunction> surface_invariant_functions(
    const MetricChart& chart, std::function<double(const Vec&)> gaussian_curvature) {
    std::vector<JetFunction> fs(4);
    const std::array<const char*, 4> labels = {"I1", "I2bar", "I3bar", "I4bar"};
    for (int q = 0; q < 4; ++q) {
        fs[q].arity = 1;
        fs[q].label = labels[q];
        fs[q].eval = [&chart, gaussian_curvature, q](const CurveJet& jet) {
            const Vec iv = surface_invariants(chart, jet, gaussian_curvature);
            // cleared of the speed factors: (I1, sqrt(I1) I2, sqrt(I1) I3, I1 I4)
            switch (q) {
                case 0: return iv[0];
                case 1: return std::sqrt(iv[0]) * iv[1];
                case 2: return std::sqrt(iv[0]) * iv[2];
                default: return iv[0] * iv[3];
            }
        };
    }
    return fs;
}

Vec homogeneous3_invariants(const Preset& preset, const CurveJet& jet) {
    if (preset.name != "g_kappa_tau")
        throw ConfigError("homogeneous3_invariants: preset must be g_kappa_tau");
    if (jet.order() < 2)
        throw Error("homogeneous3_invariants: jet order >= 2 required for kappa_1");
    const Vec x = jet.point();
    const Vec T = jet.velocity();
    const Mat g = preset.chart.metric(x);
    Vec z = Vec::Zero(3);
    z[2] = 1.0;
    const double i1 = T.dot(g * z);
    const double kt0 = T.dot(g * T) - i1 * i1;

    const auto chain = covariant_chain(preset.chart, jet, 2);
    const Vec deltas = gram_determinants(preset.chart, x, chain);
    const double kappa1 =
        std::sqrt(std::max(0.0, deltas[1])) / std::pow(deltas[0], 1.5);

    Vec out(4);
    out << jet.t0, kt0, i1, kappa1;
    return out;
}

std::vector<JetFunction> homogeneous3_invariant_functions(const Preset& preset) {
    if (preset.name != "g_kappa_tau")
        throw ConfigError("homogeneous3_invariant_functions: preset must be g_kappa_tau");
    // Capture the metric closure by value; Preset references may not outlive us.
    const MetricChart chart = preset.chart;
    std::vector<JetFunction> fs(2);
    fs[0].arity = 1;
    fs[0].label = "kappa~_0";
    fs[0].eval = [chart](const CurveJet& jet) {
        const Vec x = jet.point();
        const Vec T = jet.velocity();
        const Mat g = chart.metric(x);
        Vec z = Vec::Zero(3);
        z[2] = 1.0;
        const double i1 = T.dot(g * z);
        return T.dot(g * T) - i1 * i1;
    };
    fs[1].arity = 1;
    fs[1].label = "I1";
    fs[1].eval = [chart](const CurveJet& jet) {
        const Vec x = jet.point();
        const Mat g = chart.metric(x);
        Vec z = Vec::Zero(3);
        z[2] = 1.0;
        return jet.velocity().dot(g * z);
    };
    return fs;
}

Vec maurer_cartan_invariants(const Preset& preset, const CurveJet& jet) {
    if (preset.name != "solvable_group")
        throw ConfigError("maurer_cartan_invariants: preset must be solvable_group");
    const double z = jet.point()[2];
    Vec out(3);
    out << std::exp(-z) * jet.velocity()[0], std::exp(z) * jet.velocity()[1],
        jet.velocity()[2];
    return out;
}

Mat jet_jacobian(const std::vector<JetFunction>& fs, const CurveJet& jet, double step) {
    const int m = jet.dim();
    const int r = jet.order();
    const int cols = 1 + (r + 1) * m;
    Mat out(static_cast<int>(fs.size()), cols);
    for (size_t q = 0; q < fs.size(); ++q) {
        CurveJet j = jet;
        auto diff = [&](double& slot) {
            const double orig = slot;
            slot = orig + step;
            const double fp = fs[q].eval(j);
            slot = orig - step;
            const double fm = fs[q].eval(j);
            slot = orig;
            return (fp - fm) / (2.0 * step);
        };
        int c = 0;
        out(static_cast<int>(q), c++) = diff(j.t0);
        for (int k = 0; k <= r; ++k)
            for (int i = 0; i < m; ++i) out(static_cast<int>(q), c++) = diff(j.coords(k, i));
    }
    return out;
}

} // namespace riemcurv
