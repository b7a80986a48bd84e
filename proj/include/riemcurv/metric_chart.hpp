#pragma once

#include "riemcurv/numerics.hpp"

#include <functional>
#include <string>

namespace riemcurv {

// Axis-aligned coordinate box.
struct Box {
    Vec lo, hi;
    int dim() const { return static_cast<int>(lo.size()); }
    bool contains(const Vec& x, double margin = 0.0) const;
    static Box cube(int m, double half_width);
};

using MetricFn = std::function<Mat(const Vec&)>;
// dg(x)(i,j,k) = d g_ij / d x^k, returned as m matrices stacked: out[k](i,j).
using MetricPartialsFn = std::function<std::vector<Mat>(const Vec&)>;

// A single coordinate patch (U; x^1..x^m) with metric component evaluator.
// All geometry in this library is local to one chart.
class MetricChart {
public:
    MetricChart() = default; // empty chart; must be assigned before use
    MetricChart(int dim, Box domain, MetricFn g, MetricPartialsFn dg = nullptr,
                double orientation = +1.0, std::string label = "custom");

    int dim() const { return m_; }
    const Box& domain() const { return domain_; }
    double orientation() const { return orientation_; }
    const std::string& label() const { return label_; }
    bool has_analytic_partials() const { return static_cast<bool>(dg_); }

    // Metric components; throws DegenerateMetricError if not positive definite.
    Mat metric(const Vec& x) const;
    Mat metric_inverse(const Vec& x) const;
    // d g_ij / d x^k; analytic if available, else central differences (h_g).
    std::vector<Mat> metric_partials(const Vec& x) const;

    double inner(const Vec& x, const Vec& u, const Vec& v) const;
    double norm(const Vec& x, const Vec& u) const;
    // Signed volume of m vectors: orientation * sqrt(det g) * det[v_1..v_m].
    double volume(const Vec& x, const Mat& vectors) const;

    void require_interior(const Vec& x, double margin = 0.0) const;

    // Finite-difference step for first partials of g.
    double h_g = 1e-5;
    // Steps for successive derivative levels: dGamma (curvature), dR, d(nabla R).
    double h_gamma = 1e-4;
    double h_riemann = 1e-3;
    double h_nabla_r = 1e-3;

private:
    int m_ = 0;
    Box domain_;
    MetricFn g_;
    MetricPartialsFn dg_;
    double orientation_ = +1.0;
    std::string label_ = "empty";
};

// Tabulated metric on a regular grid, CSV columns x^1..x^m, g11, g12.., gmm
// (upper triangle, row-major), rows enumerating a full tensor-product grid.
// Values are interpolated multilinearly; accuracy is grid-limited.
MetricChart load_grid_metric_csv(const std::string& path, double orientation = +1.0);

} // namespace riemcurv
