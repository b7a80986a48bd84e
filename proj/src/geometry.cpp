#include "riemcurv/geometry.hpp"
#include "riemcurv/errors.hpp"

#include <cmath>
#include <numeric>

namespace riemcurv {

namespace {

size_t flat_index(const std::vector<int>& idx, int dim) {
    size_t f = 0;
    for (int v : idx) f = f * static_cast<size_t>(dim) + static_cast<size_t>(v);
    return f;
}

size_t stack_size(int dim, int rank) {
    size_t s = 1;
    for (int i = 0; i < rank; ++i) s *= static_cast<size_t>(dim);
    return s;
}

} // namespace

double& TensorStack::at(const std::vector<int>& idx) { return data[flat_index(idx, dim)]; }
double TensorStack::at(const std::vector<int>& idx) const { return data[flat_index(idx, dim)]; }

double TensorStack::max_abs() const {
    double m = 0.0;
    for (double v : data) m = std::max(m, std::abs(v));
    return m;
}

Vec ChristoffelValue::contract(const Vec& u, const Vec& v) const {
    const int m = static_cast<int>(point.size());
    Vec out(m);
    for (int i = 0; i < m; ++i) out[i] = u.dot(gamma[i] * v);
    return out;
}

ChristoffelValue christoffel(const MetricChart& chart, const Vec& x) {
    const int m = chart.dim();
    if (!chart.has_analytic_partials()) chart.require_interior(x, chart.h_g);
    const Mat ginv = chart.metric_inverse(x);
    const std::vector<Mat> dg = chart.metric_partials(x);

    ChristoffelValue out;
    out.point = x;
    out.gamma.assign(m, Mat::Zero(m, m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = j; k < m; ++k) {
                double s = 0.0;
                for (int l = 0; l < m; ++l)
                    s += ginv(i, l) * (dg[j](l, k) + dg[k](l, j) - dg[l](j, k));
                out.gamma[i](j, k) = 0.5 * s;
                out.gamma[i](k, j) = 0.5 * s;
            }
    return out;
}

namespace {

// R^rho_{sigma mu nu} = d_mu Gamma^rho_{nu sigma} - d_nu Gamma^rho_{mu sigma}
//                     + Gamma^rho_{mu a} Gamma^a_{nu sigma}
//                     - Gamma^rho_{nu a} Gamma^a_{mu sigma}
TensorStack riemann_tensor(const MetricChart& chart, const Vec& x) {
    const int m = chart.dim();
    const double h = chart.h_gamma;
    chart.require_interior(x, h);

    const ChristoffelValue g0 = christoffel(chart, x);
    std::vector<ChristoffelValue> gp(m), gm(m);
    Vec xs = x;
    for (int p = 0; p < m; ++p) {
        xs[p] = x[p] + h;
        gp[p] = christoffel(chart, xs);
        xs[p] = x[p] - h;
        gm[p] = christoffel(chart, xs);
        xs[p] = x[p];
    }
    auto dgamma = [&](int p, int rho, int a, int b) {
        return (gp[p].gamma[rho](a, b) - gm[p].gamma[rho](a, b)) / (2.0 * h);
    };

    TensorStack r;
    r.dim = m;
    r.j = 0;
    r.data.assign(stack_size(m, 4), 0.0);
    for (int rho = 0; rho < m; ++rho)
        for (int sig = 0; sig < m; ++sig)
            for (int mu = 0; mu < m; ++mu)
                for (int nu = 0; nu < m; ++nu) {
                    double v = dgamma(mu, rho, nu, sig) - dgamma(nu, rho, mu, sig);
                    for (int a = 0; a < m; ++a)
                        v += g0.gamma[rho](mu, a) * g0.gamma[a](nu, sig) -
                             g0.gamma[rho](nu, a) * g0.gamma[a](mu, sig);
                    r.at({rho, sig, mu, nu}) = v;
                }
    return r;
}

// One covariant derivative of a stack-valued field. The stack has one upper
// index at position `j` (after the j derivative slots); every other index is
// lower. The new direction index is prepended.
TensorStack covariant_derivative(const MetricChart& chart, const Vec& x,
                                 const std::function<TensorStack(const Vec&)>& eval,
                                 double h) {
    chart.require_interior(x, h);
    const TensorStack s0 = eval(x);
    const int m = s0.dim;
    const int rank = s0.j + 4;
    const ChristoffelValue gam = christoffel(chart, x);

    std::vector<TensorStack> sp(m), sm(m);
    Vec xs = x;
    for (int p = 0; p < m; ++p) {
        xs[p] = x[p] + h;
        sp[p] = eval(xs);
        xs[p] = x[p] - h;
        sm[p] = eval(xs);
        xs[p] = x[p];
    }

    TensorStack out;
    out.dim = m;
    out.j = s0.j + 1;
    out.data.assign(stack_size(m, rank + 1), 0.0);

    const int upper_pos = s0.j; // within the old index list
    std::vector<int> idx(rank, 0);
    const size_t total = stack_size(m, rank);
    for (size_t flat = 0; flat < total; ++flat) {
        size_t f = flat;
        for (int q = rank - 1; q >= 0; --q) {
            idx[q] = static_cast<int>(f % m);
            f /= m;
        }
        for (int p = 0; p < m; ++p) {
            double v = (sp[p].data[flat] - sm[p].data[flat]) / (2.0 * h);
            std::vector<int> tmp = idx;
            for (int a = 0; a < m; ++a) {
                tmp[upper_pos] = a;
                v += gam.gamma[idx[upper_pos]](p, a) * s0.at(tmp);
            }
            tmp[upper_pos] = idx[upper_pos];
            for (int q = 0; q < rank; ++q) {
                if (q == upper_pos) continue;
                const int orig = idx[q];
                for (int a = 0; a < m; ++a) {
                    tmp[q] = a;
                    v -= gam.gamma[a](p, orig) * s0.at(tmp);
                }
                tmp[q] = orig;
            }
            std::vector<int> oidx;
            oidx.reserve(rank + 1);
            oidx.push_back(p);
            oidx.insert(oidx.end(), idx.begin(), idx.end());
            out.at(oidx) = v;
        }
    }
    return out;
}

} // namespace

CurvatureValue riemann(const MetricChart& chart, const Vec& x, int j_max,
                       bool allow_high_order) {
    if (j_max > 2 && !allow_high_order)
        throw Error("nabla^j R supported for j <= 2 by default; pass allow_high_order");
    const int m = chart.dim();
    CurvatureValue out;
    out.point = x;
    out.dim = m;
    out.r = riemann_tensor(chart, x);

    const Mat g = chart.metric(x);
    out.r4.assign(stack_size(m, 4), 0.0);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c)
                for (int d = 0; d < m; ++d) {
                    double v = 0.0;
                    for (int rho = 0; rho < m; ++rho)
                        v += g(a, rho) * out.r.at({rho, b, c, d});
                    out.r4[flat_index({a, b, c, d}, m)] = v;
                }

    out.nablaR.push_back(out.r);
    std::function<TensorStack(const Vec&)> level = [&chart](const Vec& p) {
        return riemann_tensor(chart, p);
    };
    for (int j = 1; j <= j_max; ++j) {
        const double h = (j == 1) ? chart.h_riemann : chart.h_nabla_r;
        // capture previous level by value so each level re-evaluates from scratch
        auto prev = level;
        out.nablaR.push_back(covariant_derivative(chart, x, prev, h));
        level = [&chart, prev, h](const Vec& p) {
            return covariant_derivative(chart, p, prev, h);
        };
    }
    return out;
}

double CurvatureValue::r4_at(int a, int b, int c, int d) const {
    return r4[flat_index({a, b, c, d}, dim)];
}

Vec curvature_operator(const TensorStack& r, const Vec& u, const Vec& v, const Vec& w) {
    const int m = r.dim;
    Vec out = Vec::Zero(m);
    for (int rho = 0; rho < m; ++rho) {
        double s = 0.0;
        for (int sig = 0; sig < m; ++sig)
            for (int mu = 0; mu < m; ++mu)
                for (int nu = 0; nu < m; ++nu)
                    s += r.at({rho, sig, mu, nu}) * w[sig] * u[mu] * v[nu];
        out[rho] = s;
    }
    return out;
}

Mat lie_derivative_metric(const MetricChart& chart, const VectorFieldFn& X, const Vec& x,
                          double h) {
    const int m = chart.dim();
    chart.require_interior(x, h);
    const std::vector<Mat> dg = chart.metric_partials(x);
    const Mat g = chart.metric(x);
    const Vec Xx = X(x);

    Mat dX(m, m); // dX(i,k) = d X^i / d x^k
    Vec xs = x;
    for (int k = 0; k < m; ++k) {
        xs[k] = x[k] + h;
        const Vec fp = X(xs);
        xs[k] = x[k] - h;
        const Vec fm = X(xs);
        xs[k] = x[k];
        dX.col(k) = (fp - fm) / (2.0 * h);
    }

    Mat L = Mat::Zero(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double v = 0.0;
            for (int k = 0; k < m; ++k)
                v += Xx[k] * dg[k](i, j) + g(k, j) * dX(k, i) + g(i, k) * dX(k, j);
            L(i, j) = v;
        }
    return L;
}

double killing_residual(const MetricChart& chart, const VectorFieldFn& X, int n,
                        double inset) {
    const int m = chart.dim();
    const Box& box = chart.domain();
    double res = 0.0;
    std::vector<int> idx(m, 0);
    while (true) {
        Vec x(m);
        for (int k = 0; k < m; ++k) {
            const double a = box.lo[k] + inset, b = box.hi[k] - inset;
            x[k] = (n == 1) ? 0.5 * (a + b) : a + (b - a) * idx[k] / double(n - 1);
        }
        res = std::max(res, lie_derivative_metric(chart, X, x).cwiseAbs().maxCoeff());
        int k = 0;
        while (k < m && ++idx[k] == n) idx[k++] = 0;
        if (k == m) break;
    }
    return res;
}

namespace {

struct GeodesicState {
    Vec x, v;
};

GeodesicState geodesic_rhs(const MetricChart& chart, const GeodesicState& s) {
    const ChristoffelValue gam = christoffel(chart, s.x);
    return {s.v, -gam.contract(s.v, s.v)};
}

GeodesicState rk4_step(const MetricChart& chart, const GeodesicState& s, double dt) {
    const GeodesicState k1 = geodesic_rhs(chart, s);
    const GeodesicState k2 = geodesic_rhs(chart, {s.x + 0.5 * dt * k1.x, s.v + 0.5 * dt * k1.v});
    const GeodesicState k3 = geodesic_rhs(chart, {s.x + 0.5 * dt * k2.x, s.v + 0.5 * dt * k2.v});
    const GeodesicState k4 = geodesic_rhs(chart, {s.x + dt * k3.x, s.v + dt * k3.v});
    return {s.x + dt / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
            s.v + dt / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v)};
}

} // namespace

GeodesicResult geodesic(const MetricChart& chart, const Vec& x0, const Vec& v0,
                        double t_begin, double t_end, double step) {
    if (step <= 0.0) throw Error("geodesic: step must be positive");
    chart.require_interior(x0);
    GeodesicResult out;
    const double e0 = chart.inner(x0, v0, v0);

    auto run_direction = [&](double dir, std::vector<double>& ts, std::vector<Vec>& xs,
                             std::vector<Vec>& vs) {
        const double span = (dir > 0) ? t_end : -t_begin;
        if (span <= 0.0) return;
        const int n = static_cast<int>(std::ceil(span / step));
        const double dt = dir * span / n;
        GeodesicState s{x0, v0};
        double t = 0.0;
        for (int i = 0; i < n; ++i) {
            GeodesicState next;
            try {
                next = rk4_step(chart, s, dt);
            } catch (const StencilClippingError&) {
                out.exited_domain = true;
                break;
            }
            if (!chart.domain().contains(next.x)) {
                out.exited_domain = true;
                break;
            }
            s = next;
            t += dt;
            ts.push_back(t);
            xs.push_back(s.x);
            vs.push_back(s.v);
            out.energy_drift =
                std::max(out.energy_drift, std::abs(chart.inner(s.x, s.v, s.v) - e0));
        }
    };

    std::vector<double> tn;
    std::vector<Vec> xn, vn;
    run_direction(-1.0, tn, xn, vn);
    out.t.assign(tn.rbegin(), tn.rend());
    out.x.assign(xn.rbegin(), xn.rend());
    out.v.assign(vn.rbegin(), vn.rend());
    out.t.push_back(0.0);
    out.x.push_back(x0);
    out.v.push_back(v0);
    run_direction(+1.0, out.t, out.x, out.v);
    return out;
}

Vec exp_map(const MetricChart& chart, const Vec& x0, const Vec& v, double step) {
    const int n = std::max(1, static_cast<int>(std::ceil(1.0 / step)));
    const double dt = 1.0 / n;
    GeodesicState s{x0, v};
    for (int i = 0; i < n; ++i) s = rk4_step(chart, s, dt);
    return s.x;
}

Vec log_map(const MetricChart& chart, const Vec& x0, const Vec& y,
            const LogMapOptions& opts) {
    const int m = chart.dim();
    Vec v = y - x0; // charts are near-Euclidean at preset scales
    double fnorm = (exp_map(chart, x0, v, opts.exp_step) - y).norm();
    for (int it = 0; it < opts.max_iter; ++it) {
        if (fnorm <= opts.tol) return v;
        // Jacobian of v -> exp(x0, v) by central differences.
        Mat J(m, m);
        Vec vp = v;
        for (int k = 0; k < m; ++k) {
            vp[k] = v[k] + opts.fd_step;
            const Vec fp = exp_map(chart, x0, vp, opts.exp_step);
            vp[k] = v[k] - opts.fd_step;
            const Vec fm = exp_map(chart, x0, vp, opts.exp_step);
            vp[k] = v[k];
            J.col(k) = (fp - fm) / (2.0 * opts.fd_step);
        }
        const Vec f = exp_map(chart, x0, v, opts.exp_step) - y;
        const Vec d = J.fullPivLu().solve(-f);
        double alpha = 1.0;
        while (alpha > 1e-4) {
            const Vec trial = v + alpha * d;
            double tn;
            try {
                tn = (exp_map(chart, x0, trial, opts.exp_step) - y).norm();
            } catch (const Error&) {
                alpha *= 0.5;
                continue;
            }
            if (tn < fnorm) {
                v = trial;
                fnorm = tn;
                break;
            }
            alpha *= 0.5;
        }
        if (alpha <= 1e-4)
            throw NoConvergenceError("log_map: damped Newton stalled (target outside "
                                     "usable neighbourhood)");
    }
    if (fnorm > opts.tol)
        throw NoConvergenceError("log_map: no convergence within max_iter");
    return v;
}

NormalCoordinates normal_coordinates(const MetricChart& chart, const Vec& x0,
                                     const Mat& frame, const LogMapOptions& opts) {
    NormalCoordinates nc;
    nc.x0 = x0;
    nc.frame = frame;
    const Mat frame_inv = frame.fullPivLu().inverse();
    nc.forward = [&chart, x0, frame_inv, opts](const Vec& y) {
        return Vec(frame_inv * log_map(chart, x0, y, opts));
    };
    nc.inverse = [&chart, x0, frame, opts](const Vec& n) {
        return exp_map(chart, x0, frame * n, opts.exp_step);
    };
    return nc;
}

Mat orthonormal_frame(const MetricChart& chart, const Vec& x) {
    const int m = chart.dim();
    const Mat g = chart.metric(x);
    Mat e = Mat::Identity(m, m);
    for (int i = 0; i < m; ++i) {
        Vec v = e.col(i);
        for (int j = 0; j < i; ++j) v -= (v.dot(g * e.col(j))) * e.col(j);
        const double n = std::sqrt(v.dot(g * v));
        if (n < 1e-14) throw DegenerateMetricError("orthonormal_frame: degenerate metric");
        e.col(i) = v / n;
    }
    if (chart.volume(x, e) < 0.0) e.col(m - 1) *= -1.0;
    return e;
}

} // namespace riemcurv
