#include "riemcurv/congruence.hpp"
#include "riemcurv/errors.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace riemcurv {

double InvariantTuple::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

namespace {

// Contract index `pos` of a rank-`rank` cube with W: out[.., a, ..] =
// sum_c in[.., c, ..] W(c, a).
std::vector<double> contract_index(const std::vector<double>& in, int rank, int dim,
                                   int pos, const Mat& w) {
    std::vector<double> out(in.size(), 0.0);
    size_t right = 1;
    for (int q = pos + 1; q < rank; ++q) right *= static_cast<size_t>(dim);
    size_t left = in.size() / (right * static_cast<size_t>(dim));
    for (size_t l = 0; l < left; ++l)
        for (int c = 0; c < dim; ++c)
            for (int a = 0; a < dim; ++a) {
                const double wca = w(c, a);
                if (wca == 0.0) continue;
                const size_t src = (l * dim + c) * right;
                const size_t dst = (l * dim + a) * right;
                for (size_t rgt = 0; rgt < right; ++rgt)
                    out[dst + rgt] += wca * in[src + rgt];
            }
    return out;
}

} // namespace

std::vector<InvariantTuple> frame_invariants(const MetricChart& chart,
                                             const CurveJet& jet, int j_max) {
    const int m = chart.dim();
    if (jet.order() < m - 1) throw Error("frame_invariants: jet order >= m-1 required");
    const Vec x = jet.point();
    const auto chain = covariant_chain(chart, jet, m - 1);
    const FrenetFrame ff = frenet_frame(chart, x, chain);
    const CurvatureValue cv = riemann(chart, x, j_max);

    std::vector<InvariantTuple> out;
    for (int j = 0; j <= j_max; ++j) {
        const TensorStack& stack = cv.nablaR[j];
        const int rank = j + 4; // (p_1..p_j, rho, sigma, mu, nu)
        std::vector<double> data = stack.data;
        for (int q = 0; q < j; ++q) data = contract_index(data, rank, m, q, ff.frame);
        data = contract_index(data, rank, m, j, ff.coframe.transpose());
        for (int q = j + 1; q < rank; ++q) data = contract_index(data, rank, m, q, ff.frame);

        // Reorder (d_1..d_j, i, c, a, b) -> values[(d_1..d_j, a, b, c), i].
        InvariantTuple tuple;
        tuple.j = j;
        tuple.dim = m;
        tuple.values.assign(data.size(), 0.0);
        std::vector<int> idx(rank, 0);
        for (size_t flat = 0; flat < data.size(); ++flat) {
            size_t f = flat;
            for (int q = rank - 1; q >= 0; --q) {
                idx[q] = static_cast<int>(f % m);
                f /= m;
            }
            size_t dst = 0;
            for (int q = 0; q < j; ++q) dst = dst * m + idx[q];
            dst = dst * m + idx[j + 2]; // a (mu slot)
            dst = dst * m + idx[j + 3]; // b (nu slot)
            dst = dst * m + idx[j + 1]; // c (sigma slot)
            dst = dst * m + idx[j];     // i (rho slot)
            tuple.values[dst] = data[flat];
        }
        out.push_back(std::move(tuple));
    }
    return out;
}

Vec kappa_jet_residuals(const MetricChart& chartA, const CurveProvider& curveA,
                        const MetricChart& chartB, const CurveProvider& curveB,
                        double t0, double window, int samples) {
    const int m = chartA.dim();
    if (chartB.dim() != m) throw Error("kappa_jet_residuals: dimension mismatch");
    Vec worst = Vec::Zero(m);
    for (int s = 0; s < samples; ++s) {
        const double t =
            samples == 1 ? t0 : t0 - window + 2.0 * window * s / (samples - 1);
        const Vec ka = measure_kappas(chartA, curveA, t);
        const Vec kb = measure_kappas(chartB, curveB, t);
        worst = worst.cwiseMax((ka - kb).cwiseAbs());
    }
    return worst;
}

double CongruenceReport::worst_kappa() const {
    return kappa_residuals.size() ? kappa_residuals.maxCoeff() : 0.0;
}

double CongruenceReport::worst_tensor() const {
    double w = 0.0;
    for (const auto& t : tensor_residuals) w = std::max(w, t.max_abs());
    return w;
}

namespace {

// Sample points along the curve window plus coordinate offsets around t0;
// a point check alone cannot detect non-constant curvature in 2-d.
std::vector<Vec> class_check_points(const MetricChart& chart, const CurveProvider& curve,
                                    double t0) {
    std::vector<Vec> pts;
    for (double t : {t0 - 0.2, t0, t0 + 0.2}) pts.push_back(curve(t));
    const Vec base = curve(t0);
    for (int i = 0; i < chart.dim(); ++i)
        for (double s : {-0.15, 0.15}) {
            Vec x = base;
            x[i] += s;
            if (chart.domain().contains(x, 0.05)) pts.push_back(x);
        }
    return pts;
}

void spot_check_class(const MetricChart& chart, const CurveProvider& curve, double t0,
                      CongruenceCriterion criterion) {
    if (criterion == CongruenceCriterion::general) return;
    const int m = chart.dim();
    const auto pts = class_check_points(chart, curve, t0);

    if (criterion == CongruenceCriterion::symmetric) {
        double res = 0.0;
        for (const Vec& x : pts) res = std::max(res, riemann(chart, x, 1).nablaR[1].max_abs());
        if (res > 1e-3)
            throw ClassMismatchError("manifold fails the locally-symmetric spot check "
                                     "(|nabla R| = " + std::to_string(res) + ")");
        return;
    }

    // constant curvature: R(u,v)w = k (g(v,w) u - g(u,w) v) with one k for
    // every sampled point
    double k_min = 0.0, k_max = 0.0, worst = 0.0;
    bool first = true;
    for (const Vec& x : pts) {
        const CurvatureValue cv = riemann(chart, x, 0);
        const Mat g = chart.metric(x);
        const Vec e1 = Vec::Unit(m, 0), e2 = Vec::Unit(m, 1);
        const double g11 = e1.dot(g * e1), g22 = e2.dot(g * e2), g12 = e1.dot(g * e2);
        const double sec = e1.dot(g * curvature_operator(cv.r, e1, e2, e2)) /
                           (g11 * g22 - g12 * g12);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                const Vec u = Vec::Unit(m, a), v = Vec::Unit(m, b);
                const Vec lhs = curvature_operator(cv.r, u, v, v);
                const Vec rhs = sec * ((v.dot(g * v)) * u - (u.dot(g * v)) * v);
                worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
            }
        k_min = first ? sec : std::min(k_min, sec);
        k_max = first ? sec : std::max(k_max, sec);
        first = false;
    }
    const double spread = k_max - k_min;
    if (worst > 1e-4 || spread > 1e-4 * (1.0 + std::abs(k_max)))
        throw ClassMismatchError("manifold fails the constant-curvature spot check "
                                 "(identity residual " + std::to_string(worst) +
                                 ", curvature spread " + std::to_string(spread) + ")");
}

} // namespace

CongruenceReport congruence_test(const MetricChart& chartA, const CurveProvider& curveA,
                                 const MetricChart& chartB, const CurveProvider& curveB,
                                 double t0, const CongruenceOptions& opts) {
    const int m = chartA.dim();
    if (chartB.dim() != m) throw Error("congruence_test: dimension mismatch");

    spot_check_class(chartA, curveA, t0, opts.criterion);
    spot_check_class(chartB, curveB, t0, opts.criterion);

    CongruenceReport rep;
    rep.criterion = opts.criterion;
    rep.tol = opts.tol;
    rep.window = opts.window;
    rep.analytic_inputs = curveA.has_analytic_jets() && curveB.has_analytic_jets();

    rep.kappa_residuals = kappa_jet_residuals(chartA, curveA, chartB, curveB, t0,
                                              opts.window, opts.samples);

    int j_max = -1;
    if (opts.criterion == CongruenceCriterion::symmetric) j_max = 0;
    if (opts.criterion == CongruenceCriterion::general) j_max = opts.j_max;
    rep.j_max = std::max(j_max, 0);
    if (j_max >= 0) {
        const CurveJet jetA = curveA.jet(t0, m);
        const CurveJet jetB = curveB.jet(t0, m);
        const auto ia = frame_invariants(chartA, jetA, j_max);
        const auto ib = frame_invariants(chartB, jetB, j_max);
        for (size_t q = 0; q < ia.size(); ++q) {
            InvariantTuple diff = ia[q];
            for (size_t v = 0; v < diff.values.size(); ++v)
                diff.values[v] -= ib[q].values[v];
            rep.tensor_residuals.push_back(std::move(diff));
        }
    }

    const double bad_kappa = opts.tol.margin * opts.tol.kappa;
    const double bad_tensor = opts.tol.margin * opts.tol.tensor;
    const double wk = rep.worst_kappa();
    const double wt = rep.worst_tensor();
    if (wk <= opts.tol.kappa && wt <= opts.tol.tensor)
        rep.verdict = Verdict::congruent;
    else if (wk > bad_kappa || wt > bad_tensor)
        rep.verdict = Verdict::not_congruent;
    else
        rep.verdict = Verdict::inconclusive;

    if (opts.with_polar_check) {
        const CurveJet jetA = curveA.jet(t0, m);
        const CurveJet jetB = curveB.jet(t0, m);
        const auto chainA = covariant_chain(chartA, jetA, m - 1);
        const auto chainB = covariant_chain(chartB, jetB, m - 1);
        const Mat frameA = frenet_frame(chartA, jetA.point(), chainA).frame;
        const Mat frameB = frenet_frame(chartB, jetB.point(), chainB).frame;
        const PolarMap polar =
            polar_isometry(chartA, jetA.point(), frameA, chartB, jetB.point(), frameB);
        rep.isometry_transport_error = polar_transport_error(
            polar, curveA, curveB, t0, opts.polar_window, opts.polar_samples);
    }
    return rep;
}

PolarMap polar_isometry(const MetricChart& chartA, const Vec& x0, const Mat& frameA,
                        const MetricChart& chartB, const Vec& xbar0, const Mat& frameB) {
    PolarMap out;
    out.linear = frameB * frameA.fullPivLu().inverse();
    const Mat a = out.linear;
    LogMapOptions opts;
    opts.tol = 1e-12;
    out.map = [&chartA, &chartB, x0, xbar0, a, opts](const Vec& y) {
        const Vec v = log_map(chartA, x0, y, opts);
        return exp_map(chartB, xbar0, a * v, opts.exp_step);
    };
    return out;
}

double polar_transport_error(const PolarMap& polar, const CurveProvider& curveA,
                             const CurveProvider& curveB, double t0, double window,
                             int samples) {
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const double t =
            samples == 1 ? t0 : t0 - window + 2.0 * window * s / (samples - 1);
        worst = std::max(worst, (polar.map(curveA(t)) - curveB(t)).norm());
    }
    return worst;
}

GramMapResult gram_map(const MetricChart& chart, const CurveJet& jet, int r,
                       double tol) {
    const int m = chart.dim();
    if (r > m) throw Error("gram_map: r must be <= m");
    if (jet.order() < r) throw Error("gram_map: jet order >= r required");
    const auto chain = covariant_chain(chart, jet, r);
    const Mat g = chart.metric(jet.point());

    GramMapResult out;
    out.gram = Mat(r, r);
    for (int h = 0; h < r; ++h)
        for (int i = 0; i < r; ++i) out.gram(h, i) = chain[h].dot(g * chain[i]);
    out.leading_minors = Vec(r);
    for (int k = 1; k <= r; ++k)
        out.leading_minors[k - 1] = out.gram.topLeftCorner(k, k).determinant();

    Eigen::SelfAdjointEigenSolver<Mat> eig(out.gram);
    out.min_eigenvalue = eig.eigenvalues().minCoeff();
    if (out.min_eigenvalue > tol)
        out.classification = GramClass::interior;
    else if (out.min_eigenvalue < -tol)
        out.classification = GramClass::outside;
    else
        out.classification = GramClass::boundary;
    return out;
}

} // namespace riemcurv
