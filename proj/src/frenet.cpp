#include "riemcurv/frenet.hpp"
#include "riemcurv/errors.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace riemcurv {

namespace {

// Taylor expansions of Gamma^i_{jh} along the jet's polynomial representative,
// by divided differences in the curve parameter.
std::vector<std::vector<std::vector<Taylor>>> christoffel_along_jet(
    const MetricChart& chart, const CurveJet& jet, int order) {
    const int m = jet.dim();
    double h = 0.05 / (1.0 + jet.coords.row(1).norm());
    const int points = std::max(9, 2 * order + 3);

    // Shrink the stencil until every node stays interior.
    for (int attempt = 0; attempt < 8; ++attempt) {
        const int half = points / 2;
        bool ok = true;
        for (int q = -half; q <= half && ok; ++q)
            ok = chart.domain().contains(jet.poly_point(q * h), chart.h_g);
        if (ok) break;
        h *= 0.5;
        if (attempt == 7)
            throw StencilClippingError("covariant_chain: jet too close to the chart "
                                       "boundary for the parameter stencil");
    }

    const int half = points / 2;
    std::vector<ChristoffelValue> samples;
    samples.reserve(points);
    for (int q = -half; q <= half; ++q)
        samples.push_back(christoffel(chart, jet.poly_point(q * h)));

    Vec nodes(points);
    for (int q = 0; q < points; ++q) nodes[q] = (q - half) * h;
    std::vector<Vec> weights(order + 1);
    for (int k = 0; k <= order; ++k) weights[k] = fd_weights(0.0, nodes, k);

    std::vector<std::vector<std::vector<Taylor>>> out(
        m, std::vector<std::vector<Taylor>>(m, std::vector<Taylor>(m)));
    std::vector<double> derivs(order + 1);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = j; k < m; ++k) {
                for (int d = 0; d <= order; ++d) {
                    double acc = 0.0;
                    for (int q = 0; q < points; ++q)
                        acc += weights[d][q] * samples[q].gamma[i](j, k);
                    derivs[d] = acc;
                }
                out[i][j][k] = Taylor::from_derivatives(derivs);
                out[i][k][j] = out[i][j][k];
            }
    return out;
}

} // namespace

std::vector<Vec> covariant_chain(const MetricChart& chart, const CurveJet& jet,
                                 int count) {
    const int r = jet.order();
    const int m = jet.dim();
    if (count < 0) count = r;
    if (count > r)
        throw Error("covariant_chain: jet order " + std::to_string(r) +
                    " insufficient for chain length " + std::to_string(count));
    if (!jet.is_finite()) throw Error("covariant_chain: jet has non-finite entries");
    if (count == 0) return {};
    chart.require_interior(jet.point());

    // x^i(t) as Taylor series of order r; T = dx/dt.
    std::vector<Taylor> x_series(m);
    for (int i = 0; i < m; ++i) {
        std::vector<double> d(r + 1);
        for (int k = 0; k <= r; ++k) d[k] = jet.coords(k, i);
        x_series[i] = Taylor::from_derivatives(d);
    }
    std::vector<Taylor> current(m);
    for (int i = 0; i < m; ++i) current[i] = x_series[i].derivative();

    const int gamma_order = std::max(0, count - 2);
    auto gamma = christoffel_along_jet(chart, jet, gamma_order);

    std::vector<Taylor> tangent = current;
    std::vector<Vec> chain;
    chain.reserve(count);
    Vec v0(m);
    for (int i = 0; i < m; ++i) v0[i] = current[i].value();
    chain.push_back(v0);

    for (int k = 1; k < count; ++k) {
        std::vector<Taylor> next(m);
        for (int i = 0; i < m; ++i) {
            Taylor acc = current[i].derivative();
            for (int j = 0; j < m; ++j)
                for (int h = 0; h < m; ++h)
                    acc += gamma[i][j][h].truncated(acc.order()) *
                           tangent[j].truncated(acc.order()) *
                           current[h].truncated(acc.order());
            next[i] = acc;
        }
        current = std::move(next);
        Vec vk(m);
        for (int i = 0; i < m; ++i) vk[i] = current[i].value();
        chain.push_back(vk);
    }
    return chain;
}

Vec gram_determinants(const MetricChart& chart, const Vec& x,
                      const std::vector<Vec>& chain) {
    const int n = static_cast<int>(chain.size());
    if (n == 0) throw Error("gram_determinants: empty chain");
    const Mat g = chart.metric(x);
    Mat gram(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) gram(i, j) = chain[i].dot(g * chain[j]);
    Vec deltas(n);
    for (int k = 1; k <= n; ++k) deltas[k - 1] = gram.topLeftCorner(k, k).determinant();
    return deltas;
}

CurvatureList curvatures(const Vec& deltas, double last_sign) {
    const int m = static_cast<int>(deltas.size());
    for (int k = 1; k <= m - 1; ++k)
        if (deltas[k - 1] <= 0.0)
            throw NotFrenetError("curvatures: Delta_" + std::to_string(k) +
                                 " <= 0 (not a Frenet jet)", k);
    CurvatureList out;
    out.kappas = Vec::Zero(m);
    out.degenerate_last = false;
    out.kappas[0] = std::sqrt(deltas[0]);
    auto delta = [&](int k) { return k == 0 ? 1.0 : deltas[k - 1]; };
    for (int i = 1; i < m; ++i) {
        const double prod = delta(i - 1) * delta(i + 1);
        double kappa = std::sqrt(std::max(0.0, prod)) / (std::sqrt(deltas[0]) * delta(i));
        if (i == m - 1) {
            if (last_sign == 0.0) {
                kappa = 0.0;
                out.degenerate_last = true;
            } else if (last_sign < 0.0) {
                kappa = -kappa;
            }
        }
        out.kappas[i] = kappa;
    }
    return out;
}

FrenetFrame frenet_frame(const MetricChart& chart, const Vec& x,
                         const std::vector<Vec>& chain) {
    const int m = chart.dim();
    if (static_cast<int>(chain.size()) < m - 1)
        throw Error("frenet_frame: chain must contain T..nabla^{m-2}T");
    const Mat g = chart.metric(x);

    Mat frame(m, m);
    for (int i = 0; i < m - 1; ++i) {
        Vec y = chain[i];
        for (int j = 0; j < i; ++j) y -= (chain[i].dot(g * frame.col(j))) * frame.col(j);
        const double norm = std::sqrt(std::max(0.0, y.dot(g * y)));
        if (norm < 1e-12 * (1.0 + chain[i].norm()))
            throw NotFrenetError("frenet_frame: chain rank deficient", i + 1);
        frame.col(i) = y / norm;
    }

    if (m == 1) {
        frame.col(0) = chain[0] / std::sqrt(chain[0].dot(g * chain[0]));
    } else {
        // Unit completion orthogonal to X_1..X_{m-1}, oriented positively.
        Mat a(m - 1, m);
        for (int i = 0; i < m - 1; ++i) a.row(i) = (g * frame.col(i)).transpose();
        Eigen::FullPivLU<Mat> lu(a);
        const Mat kernel = lu.kernel();
        Vec w = kernel.col(0);
        w /= std::sqrt(w.dot(g * w));
        frame.col(m - 1) = w;
        if (chart.volume(x, frame) < 0.0) frame.col(m - 1) = -w;
    }

    FrenetFrame out;
    out.frame = frame;
    out.coframe = frame.fullPivLu().inverse();
    return out;
}

FrenetResult frenet_result(const MetricChart& chart, const CurveJet& jet) {
    const int m = jet.dim();
    if (m != chart.dim()) throw Error("frenet_result: jet/chart dimension mismatch");
    if (jet.order() < m)
        throw Error("frenet_result: jet order >= dim required for the full chain");

    FrenetResult out;
    out.chain = covariant_chain(chart, jet, m);
    const Vec x = jet.point();
    out.deltas = gram_determinants(chart, x, out.chain);

    Mat ext(m, m);
    for (int i = 0; i < m; ++i) ext.col(i) = out.chain[i];
    const double vol = chart.volume(x, ext);
    const double sign = (vol > 0.0) ? 1.0 : (vol < 0.0 ? -1.0 : 0.0);

    const CurvatureList kl = curvatures(out.deltas, sign);
    out.kappas = kl.kappas;
    out.degenerate_last = kl.degenerate_last;

    const FrenetFrame ff = frenet_frame(chart, x, out.chain);
    out.frame = ff.frame;
    out.coframe = ff.coframe;

    const Mat g = chart.metric(x);
    out.f = Mat::Zero(m, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i <= j; ++i) out.f(i, j) = out.chain[j].dot(g * ff.frame.col(i));
    return out;
}

Vec measure_kappas(const MetricChart& chart, const CurveProvider& curve, double t) {
    const int m = chart.dim();
    return frenet_result(chart, curve.jet(t, m)).kappas;
}

std::vector<std::vector<Taylor>> f_table_taylor(const std::vector<Taylor>& kappas,
                                                int m) {
    if (static_cast<int>(kappas.size()) < m)
        throw Error("f table needs kappa_0..kappa_{m-1}");
    for (const Taylor& k : kappas)
        if (k.order() < m - 1) throw Error("f table needs kappa Taylor order >= m-1");

    std::vector<std::vector<Taylor>> f(m + 1, std::vector<Taylor>(m + 1));
    const auto& k = kappas; // k[i] = kappa_i
    f[1][1] = k[0];
    if (m >= 2) {
        f[1][2] = f[1][1].derivative();
        f[2][2] = f[1][1] * k[0] * k[1];
    }
    for (int j = 3; j <= m; ++j) {
        f[1][j] = f[1][j - 1].derivative() - f[2][j - 1] * k[0] * k[1];
        for (int i = 2; i <= j - 2; ++i)
            f[i][j] = f[i][j - 1].derivative() - f[i + 1][j - 1] * k[0] * k[i] +
                      f[i - 1][j - 1] * k[0] * k[i - 1];
        f[j - 1][j] = f[j - 1][j - 1].derivative() + f[j - 2][j - 1] * k[0] * k[j - 2];
        f[j][j] = f[j - 1][j - 1] * k[0] * k[j - 1];
    }
    return f;
}

Mat f_table_from_kappas(const std::vector<Taylor>& kappas, int m) {
    const auto f = f_table_taylor(kappas, m);
    Mat out = Mat::Zero(m, m);
    for (int j = 1; j <= m; ++j)
        for (int i = 1; i <= j; ++i) out(i - 1, j - 1) = f[i][j].value();
    return out;
}

namespace {

Mat weighted_chain_matrix(const MetricChart& chart, const Vec& x,
                          const std::vector<Vec>& vectors) {
    const Mat g = chart.metric(x);
    const Eigen::LLT<Mat> llt(g);
    Mat b(chart.dim(), static_cast<int>(vectors.size()));
    for (size_t i = 0; i < vectors.size(); ++i) b.col(static_cast<int>(i)) = vectors[i];
    return llt.matrixU() * b;
}

} // namespace

bool is_frenet_jet(const MetricChart& chart, const CurveJet& jet, double tol) {
    const int m = jet.dim();
    if (jet.order() < m - 1) throw Error("is_frenet_jet: jet order >= m-1 required");
    const auto chain = covariant_chain(chart, jet, m - 1);
    const Mat b = weighted_chain_matrix(chart, jet.point(), chain);
    return numerical_rank(b, tol) == m - 1;
}

double frenet_margin(const MetricChart& chart, const CurveJet& jet) {
    const int m = jet.dim();
    const auto chain = covariant_chain(chart, jet, m - 1);
    return singular_value_ratio(weighted_chain_matrix(chart, jet.point(), chain));
}

std::vector<Vec> normal_derivative_vectors(const MetricChart& chart, const CurveJet& jet,
                                           int count) {
    const int m = jet.dim();
    const Vec x0 = jet.point();
    const Mat frame = orthonormal_frame(chart, x0);
    LogMapOptions opts;
    opts.tol = 1e-12;
    const NormalCoordinates nc = normal_coordinates(chart, x0, frame, opts);

    double h = 0.04 / (1.0 + jet.coords.row(1).norm());
    const int points = std::max(11, 2 * count + 3);
    const int half = points / 2;
    for (int attempt = 0; attempt < 6; ++attempt) {
        if (chart.domain().contains(jet.poly_point(half * h), 0.0) &&
            chart.domain().contains(jet.poly_point(-half * h), 0.0))
            break;
        h *= 0.5;
    }

    auto f = [&](double s) { return nc.forward(jet.poly_point(s)); };
    const auto derivs = fd_vector_derivatives(f, count, h, points);
    std::vector<Vec> out;
    out.reserve(count);
    for (int k = 1; k <= count; ++k) out.push_back(frame * derivs[k]);
    (void)m;
    return out;
}

bool is_normal_position_jet(const MetricChart& chart, const CurveJet& jet, double tol) {
    const int m = jet.dim();
    if (jet.order() < m - 1)
        throw Error("is_normal_position_jet: jet order >= m-1 required");
    const auto u = normal_derivative_vectors(chart, jet, m - 1);
    const Mat b = weighted_chain_matrix(chart, jet.point(), u);
    return numerical_rank(b, tol) == m - 1;
}

} // namespace riemcurv
