#include "riemcurv/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace riemcurv {

// B. Fornberg, "Generation of finite difference formulas on arbitrarily
// spaced grids", Math. Comp. 51 (1988).
Vec fd_weights(double x0, const Vec& nodes, int order) {
    const int n = static_cast<int>(nodes.size());
    if (order >= n) throw std::invalid_argument("fd_weights: order >= #nodes");
    Mat c = Mat::Zero(n, order + 1);
    double c1 = 1.0;
    double c4 = nodes[0] - x0;
    c(0, 0) = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
                c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
            }
            for (int k = mn; k >= 1; --k)
                c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
            c(j, 0) = c4 * c(j, 0) / c3;
        }
        c1 = c2;
    }
    return c.col(order);
}

static Vec symmetric_nodes(double h, int points) {
    Vec nodes(points);
    const int half = points / 2;
    for (int i = 0; i < points; ++i) nodes[i] = (i - half) * h;
    return nodes;
}

std::vector<double> fd_derivatives(const std::function<double(double)>& f,
                                   int max_order, double h, int points) {
    if (points <= max_order) points = max_order + 1 + (max_order % 2 == 0 ? 1 : 0);
    if (points % 2 == 0) ++points;
    const Vec nodes = symmetric_nodes(h, points);
    Vec values(points);
    for (int i = 0; i < points; ++i) values[i] = f(nodes[i]);
    std::vector<double> out(max_order + 1);
    for (int k = 0; k <= max_order; ++k)
        out[k] = fd_weights(0.0, nodes, k).dot(values);
    return out;
}

std::vector<Vec> fd_vector_derivatives(const std::function<Vec(double)>& f,
                                       int max_order, double h, int points) {
    if (points <= max_order) points = max_order + 1;
    if (points % 2 == 0) ++points;
    const Vec nodes = symmetric_nodes(h, points);
    std::vector<Vec> values(points);
    for (int i = 0; i < points; ++i) values[i] = f(nodes[i]);
    const int dim = static_cast<int>(values[0].size());
    std::vector<Vec> out(max_order + 1, Vec::Zero(dim));
    for (int k = 0; k <= max_order; ++k) {
        const Vec w = fd_weights(0.0, nodes, k);
        for (int i = 0; i < points; ++i) out[k] += w[i] * values[i];
    }
    return out;
}

Taylor Taylor::constant(double v, int order) {
    std::vector<double> c(order + 1, 0.0);
    c[0] = v;
    return Taylor(std::move(c));
}

Taylor Taylor::from_derivatives(const std::vector<double>& derivs) {
    std::vector<double> c(derivs.size());
    double fact = 1.0;
    for (size_t k = 0; k < derivs.size(); ++k) {
        if (k > 0) fact *= static_cast<double>(k);
        c[k] = derivs[k] / fact;
    }
    return Taylor(std::move(c));
}

double Taylor::derivative_value(int k) const {
    if (k > order()) return 0.0;
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    return c_[k] * fact;
}

Taylor Taylor::derivative() const {
    if (c_.size() <= 1) return Taylor(std::vector<double>{0.0});
    std::vector<double> d(c_.size() - 1);
    for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
    return Taylor(std::move(d));
}

Taylor Taylor::truncated(int order) const {
    std::vector<double> d(order + 1, 0.0);
    for (int k = 0; k <= order && k <= this->order(); ++k) d[k] = c_[k];
    return Taylor(std::move(d));
}

Taylor operator+(const Taylor& a, const Taylor& b) {
    const int n = std::min(a.order(), b.order());
    std::vector<double> c(n + 1);
    for (int k = 0; k <= n; ++k) c[k] = a.c_[k] + b.c_[k];
    return Taylor(std::move(c));
}

Taylor operator-(const Taylor& a, const Taylor& b) {
    const int n = std::min(a.order(), b.order());
    std::vector<double> c(n + 1);
    for (int k = 0; k <= n; ++k) c[k] = a.c_[k] - b.c_[k];
    return Taylor(std::move(c));
}

Taylor operator*(const Taylor& a, const Taylor& b) {
    const int n = std::min(a.order(), b.order());
    std::vector<double> c(n + 1, 0.0);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n && j <= b.order(); ++j)
            c[i + j] += a.c_[i] * b.c_[j];
    return Taylor(std::move(c));
}

Taylor Taylor::operator*(double s) const {
    std::vector<double> c(c_);
    for (double& v : c) v *= s;
    return Taylor(std::move(c));
}

int numerical_rank(const Mat& a, double rel_tol) {
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<Mat> svd(a);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s[0] <= 0.0) return 0;
    int r = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s[i] > rel_tol * s[0]) ++r;
    return r;
}

double singular_value_ratio(const Mat& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<Mat> svd(a);
    const auto& s = svd.singularValues();
    const int n = static_cast<int>(s.size());
    if (n == 0 || s[0] <= 0.0) return 0.0;
    return s[n - 1] / s[0];
}

} // namespace riemcurv
