#include "riemcurv/reconstruction.hpp"
#include "riemcurv/errors.hpp"

#include <cmath>

namespace riemcurv {

Taylor KappaFunction::expand(double t, int order) const {
    if (taylor) return taylor(t, order).truncated(order);
    auto f = [this, t](double s) { return value(t + s); };
    return Taylor::from_derivatives(fd_derivatives(f, order, 2e-2, 2 * order + 5));
}

KappaFunction KappaFunction::constant(double v) {
    KappaFunction k;
    k.value = [v](double) { return v; };
    k.taylor = [v](double, int order) { return Taylor::constant(v, order); };
    return k;
}

KappaFunction KappaFunction::polynomial(std::vector<double> coeffs) {
    KappaFunction k;
    k.value = [coeffs](double t) {
        double acc = 0.0;
        for (size_t i = coeffs.size(); i-- > 0;) acc = acc * t + coeffs[i];
        return acc;
    };
    k.taylor = [coeffs](double t, int order) {
        // evaluate successive derivative polynomials at t
        std::vector<double> derivs(order + 1, 0.0);
        std::vector<double> c(coeffs);
        for (int d = 0; d <= order; ++d) {
            double acc = 0.0;
            for (size_t i = c.size(); i-- > 0;) acc = acc * t + c[i];
            derivs[d] = acc;
            for (size_t i = 1; i < c.size(); ++i) c[i - 1] = c[i] * static_cast<double>(i);
            if (!c.empty()) c.pop_back();
        }
        return Taylor::from_derivatives(derivs);
    };
    return k;
}

void CurvatureSpec::validate_positivity(double window, int samples) const {
    for (int j = 0; j + 1 < m; ++j)
        for (int s = 0; s < samples; ++s) {
            const double t = t0 - window + 2.0 * window * s / (samples - 1);
            if (kappas[j].value(t) <= 0.0)
                throw Error("kappa_" + std::to_string(j) +
                            " not positive at t = " + std::to_string(t));
        }
}

ReconstructionState frenet_rhs(const MetricChart& chart, const ReconstructionState& s,
                               const CurvatureSpec& spec) {
    const int m = spec.m;
    Vec kappa(m);
    for (int j = 0; j < m; ++j) kappa[j] = spec.kappas[j].value(s.t);
    const ChristoffelValue gam = christoffel(chart, s.x);
    const Vec y1 = s.Y.col(0);

    ReconstructionState d;
    d.t = 1.0;
    d.x = kappa[0] * y1;
    d.Y = Mat::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        Vec straight = Vec::Zero(m);
        if (i == 0) {
            if (m > 1) straight = kappa[0] * kappa[1] * s.Y.col(1);
        } else if (i < m - 1) {
            straight = kappa[0] * (kappa[i + 1] * s.Y.col(i + 1) - kappa[i] * s.Y.col(i - 1));
        } else {
            straight = -kappa[0] * kappa[m - 1] * s.Y.col(m - 2);
        }
        d.Y.col(i) = straight - kappa[0] * gam.contract(y1, s.Y.col(i));
    }
    // m = 1 has only the tangent column; the system is dx = kappa_0 X_1,
    // dX_1 = -kappa_0 Gamma(X_1, X_1) (covered above with empty straight part).
    return d;
}

namespace {

ReconstructionState axpy(const ReconstructionState& s, double a,
                         const ReconstructionState& d) {
    return {s.t + a * d.t, s.x + a * d.x, s.Y + a * d.Y};
}

void check_initial_frame(const MetricChart& chart, const Vec& x0, const Mat& frame0) {
    const Mat g = chart.metric(x0);
    const Mat gram = frame0.transpose() * g * frame0;
    const double dev = (gram - Mat::Identity(frame0.cols(), frame0.cols()))
                           .cwiseAbs()
                           .maxCoeff();
    if (dev > 1e-8)
        throw Error("reconstruct: frame0 not g-orthonormal (deviation " +
                    std::to_string(dev) + ")");
    if (chart.volume(x0, frame0) <= 0.0)
        throw Error("reconstruct: frame0 not positively oriented");
}

} // namespace

ReconstructionResult reconstruct(const MetricChart& chart, const Vec& x0,
                                 const Mat& frame0, const CurvatureSpec& spec,
                                 double span, const ReconstructOptions& opts) {
    if (spec.m != chart.dim()) throw Error("reconstruct: spec/chart dimension mismatch");
    chart.require_interior(x0);
    check_initial_frame(chart, x0, frame0);
    spec.validate_positivity(span);

    const int n = static_cast<int>(std::ceil(span / opts.step));
    ReconstructionResult out;

    auto rk4 = [&](const ReconstructionState& s, double dt) {
        const auto k1 = frenet_rhs(chart, s, spec);
        const auto k2 = frenet_rhs(chart, axpy(s, 0.5 * dt, k1), spec);
        const auto k3 = frenet_rhs(chart, axpy(s, 0.5 * dt, k2), spec);
        const auto k4 = frenet_rhs(chart, axpy(s, dt, k3), spec);
        ReconstructionState next = s;
        next.t += dt;
        next.x += dt / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
        next.Y += dt / 6.0 * (k1.Y + 2.0 * k2.Y + 2.0 * k3.Y + k4.Y);
        return next;
    };

    auto drift = [&](const ReconstructionState& s) {
        const Mat g = chart.metric(s.x);
        return (s.Y.transpose() * g * s.Y - Mat::Identity(spec.m, spec.m))
            .cwiseAbs()
            .maxCoeff();
    };

    auto reorthonormalize = [&](ReconstructionState& s) {
        const Mat g = chart.metric(s.x);
        for (int i = 0; i < spec.m; ++i) {
            Vec v = s.Y.col(i);
            for (int j = 0; j < i; ++j) v -= v.dot(g * s.Y.col(j)) * s.Y.col(j);
            s.Y.col(i) = v / std::sqrt(v.dot(g * v));
        }
    };

    auto run = [&](double dir, std::vector<double>& ts, std::vector<Vec>& xs,
                   std::vector<Mat>& fs) {
        ReconstructionState s{spec.t0, x0, frame0};
        const double dt = dir * span / n;
        for (int i = 0; i < n; ++i) {
            ReconstructionState next;
            try {
                next = rk4(s, dt);
            } catch (const StencilClippingError&) {
                out.exited_domain = true;
                break;
            }
            if (!chart.domain().contains(next.x)) {
                out.exited_domain = true;
                break;
            }
            s = next;
            if (opts.reorthonormalize) reorthonormalize(s);
            out.max_orthonormality_drift = std::max(out.max_orthonormality_drift, drift(s));
            ts.push_back(s.t);
            xs.push_back(s.x);
            fs.push_back(s.Y);
        }
    };

    std::vector<double> tn;
    std::vector<Vec> xn;
    std::vector<Mat> fn;
    run(-1.0, tn, xn, fn);
    out.t.assign(tn.rbegin(), tn.rend());
    out.x.assign(xn.rbegin(), xn.rend());
    out.frames.assign(fn.rbegin(), fn.rend());
    out.t.push_back(spec.t0);
    out.x.push_back(x0);
    out.frames.push_back(frame0);
    run(+1.0, out.t, out.x, out.frames);
    return out;
}

CurveProvider ReconstructionResult::sampled_curve(int thin) const {
    std::vector<double> ts;
    std::vector<Vec> xs;
    for (size_t i = 0; i < t.size(); i += static_cast<size_t>(thin)) {
        ts.push_back(t[i]);
        xs.push_back(x[i]);
    }
    return make_sampled_curve(ts, xs);
}

Mat initial_data_from_vectors(const MetricChart& chart, const Vec& x0, const Mat& w,
                              const CurvatureSpec& spec, double rel_tol) {
    const int m = spec.m;
    if (w.rows() != m || w.cols() != m)
        throw Error("initial_data_from_vectors: w must be m columns w_1..w_m");
    chart.require_interior(x0);

    // (w_1..w_{m-1}) must be linearly independent.
    {
        const Mat g = chart.metric(x0);
        const Eigen::LLT<Mat> llt(g);
        const Mat b = llt.matrixU() * w.leftCols(m - 1);
        if (numerical_rank(b, 1e-10) < m - 1)
            throw NotFrenetError("initial_data_from_vectors: (w_1..w_{m-1}) rank deficient",
                                 numerical_rank(b, 1e-10) + 1);
    }

    std::vector<Taylor> ks(m);
    for (int j = 0; j < m; ++j) ks[j] = spec.kappas[j].expand(spec.t0, m - 1);
    const Mat f = f_table_from_kappas(ks, m);

    const Mat g = chart.metric(x0);
    double worst = 0.0;
    int wi = 0, wj = 0;
    double scale = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) scale = std::max(scale, std::abs(w.col(i).dot(g * w.col(j))));
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            double predicted = 0.0;
            for (int h = 0; h <= i; ++h) predicted += f(h, i) * f(h, j);
            const double res = std::abs(w.col(i).dot(g * w.col(j)) - predicted);
            if (res > worst) {
                worst = res;
                wi = i + 1;
                wj = j + 1;
            }
        }
    if (worst > rel_tol * std::max(1.0, scale))
        throw IncompatibleDataError(
            "initial data violate the Gram compatibility condition (worst residual " +
                std::to_string(worst) + " at (" + std::to_string(wi) + "," +
                std::to_string(wj) + "))",
            worst, wi, wj);

    std::vector<Vec> chain;
    for (int i = 0; i < m - 1; ++i) chain.push_back(w.col(i));
    return frenet_frame(chart, x0, chain).frame;
}

} // namespace riemcurv
