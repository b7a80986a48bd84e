#include "riemcurv/metric_chart.hpp"
#include "riemcurv/errors.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace riemcurv {

bool Box::contains(const Vec& x, double margin) const {
    for (int i = 0; i < dim(); ++i)
        if (x[i] < lo[i] + margin || x[i] > hi[i] - margin) return false;
    return true;
}

Box Box::cube(int m, double half_width) {
    Box b;
    b.lo = Vec::Constant(m, -half_width);
    b.hi = Vec::Constant(m, half_width);
    return b;
}

MetricChart::MetricChart(int dim, Box domain, MetricFn g, MetricPartialsFn dg,
                         double orientation, std::string label)
    : m_(dim), domain_(std::move(domain)), g_(std::move(g)), dg_(std::move(dg)),
      orientation_(orientation), label_(std::move(label)) {}

Mat MetricChart::metric(const Vec& x) const {
    Mat g = g_(x);
    g = 0.5 * (g + g.transpose().eval()); // enforce exact symmetry
    Eigen::LLT<Mat> llt(g);
    if (llt.info() != Eigen::Success)
        throw DegenerateMetricError("metric not positive definite at sampled point (chart '" +
                                    label_ + "')");
    return g;
}

Mat MetricChart::metric_inverse(const Vec& x) const {
    const Mat g = metric(x);
    return g.llt().solve(Mat::Identity(m_, m_));
}

std::vector<Mat> MetricChart::metric_partials(const Vec& x) const {
    if (dg_) return dg_(x);
    require_interior(x, h_g);
    std::vector<Mat> out(m_);
    Vec xp = x, xm = x;
    for (int k = 0; k < m_; ++k) {
        xp[k] = x[k] + h_g;
        xm[k] = x[k] - h_g;
        out[k] = (g_(xp) - g_(xm)) / (2.0 * h_g);
        xp[k] = x[k];
        xm[k] = x[k];
    }
    return out;
}

double MetricChart::inner(const Vec& x, const Vec& u, const Vec& v) const {
    return u.dot(metric(x) * v);
}

double MetricChart::norm(const Vec& x, const Vec& u) const {
    return std::sqrt(std::max(0.0, inner(x, u, u)));
}

double MetricChart::volume(const Vec& x, const Mat& vectors) const {
    const Mat g = metric(x);
    return orientation_ * std::sqrt(g.determinant()) * vectors.determinant();
}

void MetricChart::require_interior(const Vec& x, double margin) const {
    if (static_cast<int>(x.size()) != m_)
        throw Error("point dimension does not match chart dimension");
    if (!domain_.contains(x, margin))
        throw StencilClippingError("point too close to the chart boundary (chart '" +
                                   label_ + "')");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    return out;
}

} // namespace

MetricChart load_grid_metric_csv(const std::string& path, double orientation) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open grid metric file: " + path);
    std::string header;
    if (!std::getline(in, header)) throw ConfigError("empty grid metric file");
    const auto cols = split_csv_line(header);

    int m = 0;
    while (m < static_cast<int>(cols.size()) && cols[m].size() >= 1 && cols[m][0] == 'x') ++m;
    const int ncomp = m * (m + 1) / 2;
    if (m == 0 || static_cast<int>(cols.size()) != m + ncomp)
        throw ConfigError("grid metric header must be x1..xm,g11,g12,..,gmm");

    std::vector<Vec> points;
    std::vector<std::vector<double>> comps;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto toks = split_csv_line(line);
        if (static_cast<int>(toks.size()) != m + ncomp)
            throw ConfigError("grid metric row has wrong column count");
        Vec p(m);
        for (int i = 0; i < m; ++i) p[i] = std::stod(toks[i]);
        std::vector<double> c(ncomp);
        for (int i = 0; i < ncomp; ++i) c[i] = std::stod(toks[m + i]);
        points.push_back(p);
        comps.push_back(std::move(c));
    }

    // Recover per-axis sorted grids; rows must form the full tensor product.
    std::vector<std::vector<double>> axes(m);
    for (int k = 0; k < m; ++k) {
        std::vector<double> vals;
        for (const auto& p : points) vals.push_back(p[k]);
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end(),
                               [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                   vals.end());
        if (vals.size() < 2) throw ConfigError("grid metric axis needs at least two nodes");
        axes[k] = vals;
    }
    size_t expected = 1;
    for (const auto& ax : axes) expected *= ax.size();
    if (expected != points.size())
        throw ConfigError("grid metric rows do not form a full tensor grid");

    // Index rows by multi-index.
    std::vector<size_t> strides(m, 1);
    for (int k = m - 2; k >= 0; --k) strides[k] = strides[k + 1] * axes[k + 1].size();
    std::vector<std::vector<double>> table(expected);
    for (size_t r = 0; r < points.size(); ++r) {
        size_t idx = 0;
        for (int k = 0; k < m; ++k) {
            const auto& ax = axes[k];
            auto it = std::lower_bound(ax.begin(), ax.end(), points[r][k] - 1e-12);
            idx += strides[k] * static_cast<size_t>(it - ax.begin());
        }
        table[idx] = comps[r];
    }

    Box box;
    box.lo = Vec(m);
    box.hi = Vec(m);
    for (int k = 0; k < m; ++k) {
        box.lo[k] = axes[k].front();
        box.hi[k] = axes[k].back();
    }

    auto g = [m, axes, strides, table, ncomp](const Vec& x) -> Mat {
        // Multilinear interpolation over the containing cell.
        std::vector<int> cell(m);
        std::vector<double> frac(m);
        for (int k = 0; k < m; ++k) {
            const auto& ax = axes[k];
            auto it = std::upper_bound(ax.begin(), ax.end(), x[k]);
            int hi = static_cast<int>(it - ax.begin());
            hi = std::clamp(hi, 1, static_cast<int>(ax.size()) - 1);
            cell[k] = hi - 1;
            frac[k] = (x[k] - ax[hi - 1]) / (ax[hi] - ax[hi - 1]);
        }
        std::vector<double> acc(ncomp, 0.0);
        const int corners = 1 << m;
        for (int c = 0; c < corners; ++c) {
            double w = 1.0;
            size_t idx = 0;
            for (int k = 0; k < m; ++k) {
                const int bit = (c >> k) & 1;
                w *= bit ? frac[k] : 1.0 - frac[k];
                idx += strides[k] * static_cast<size_t>(cell[k] + bit);
            }
            for (int i = 0; i < ncomp; ++i) acc[i] += w * table[idx][i];
        }
        Mat out(m, m);
        int q = 0;
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                out(i, j) = acc[q];
                out(j, i) = acc[q];
                ++q;
            }
        return out;
    };

    MetricChart chart(m, box, g, nullptr, orientation, "grid:" + path);
    chart.h_g = 1e-4; // interpolated data; finer steps only amplify kinks
    return chart;
}

} // namespace riemcurv
