#pragma once

#include "riemcurv/metric_chart.hpp"

#include <array>
#include <functional>
#include <vector>

namespace riemcurv {

using VectorFieldFn = std::function<Vec(const Vec&)>;

// Gamma^i_{jk} at a point, symmetric in (j,k).
struct ChristoffelValue {
    Vec point;
    std::vector<Mat> gamma; // gamma[i](j,k)
    Vec contract(const Vec& u, const Vec& v) const; // Gamma^i_{jk} u^j v^k
};

// Rank-(j+4) covariant derivative stacks of the curvature tensor, stored flat.
// Index order: (p_1,...,p_j, rho, sigma, mu, nu), row-major, where the value is
// the component of (nabla_{p_1}...nabla_{p_j} R) with R(e_mu, e_nu) e_sigma =
// R^rho_{sigma mu nu} e_rho. Derivative directions prepend on each level.
struct TensorStack {
    int dim = 0;
    int j = 0; // number of derivative slots
    std::vector<double> data;
    double& at(const std::vector<int>& idx);
    double at(const std::vector<int>& idx) const;
    double max_abs() const;
};

struct CurvatureValue {
    Vec point;
    TensorStack r;                  // R^rho_{sigma mu nu}
    std::vector<double> r4;         // R4(a,b,c,d) = g(R(c,d) b, a), flat (a,b,c,d)
    std::vector<TensorStack> nablaR; // stacks for j = 0..j_max
    int dim = 0;
    double r4_at(int a, int b, int c, int d) const;
};

ChristoffelValue christoffel(const MetricChart& chart, const Vec& x);

// Curvature tensor and its covariant derivatives up to j_max (default cap 2;
// higher orders only behind allow_high_order).
CurvatureValue riemann(const MetricChart& chart, const Vec& x, int j_max = 0,
                       bool allow_high_order = false);

// R(u,v)w as a tangent vector.
Vec curvature_operator(const TensorStack& r, const Vec& u, const Vec& v, const Vec& w);

// Lie derivative of the metric along X; entries of (L_X g)_ij at x.
Mat lie_derivative_metric(const MetricChart& chart, const VectorFieldFn& X, const Vec& x,
                          double h = 1e-5);

// max over a uniform grid (n per axis, inset from the boundary) of
// max-abs entries of L_X g.
double killing_residual(const MetricChart& chart, const VectorFieldFn& X, int n = 5,
                        double inset = 0.1);

struct GeodesicResult {
    std::vector<double> t;
    std::vector<Vec> x;
    std::vector<Vec> v;
    bool exited_domain = false;
    double energy_drift = 0.0; // max |g(v,v) - g(v0,v0)|
};

GeodesicResult geodesic(const MetricChart& chart, const Vec& x0, const Vec& v0,
                        double t_begin, double t_end, double step);

Vec exp_map(const MetricChart& chart, const Vec& x0, const Vec& v, double step = 5e-3);

struct LogMapOptions {
    int max_iter = 50;
    double tol = 1e-12;
    double fd_step = 1e-6;
    double exp_step = 5e-3;
};

Vec log_map(const MetricChart& chart, const Vec& x0, const Vec& y,
            const LogMapOptions& opts = {});

// Chart-to-normal coordinate transform attached to a g-orthonormal frame at x0:
// forward(y) = components of log_{x0}(y) in the frame, inverse(n) = exp of the
// recombined vector. The frame columns are returned in `frame`.
struct NormalCoordinates {
    Vec x0;
    Mat frame; // columns e_1..e_m, g-orthonormal
    std::function<Vec(const Vec&)> forward;
    std::function<Vec(const Vec&)> inverse;
};

NormalCoordinates normal_coordinates(const MetricChart& chart, const Vec& x0,
                                     const Mat& frame, const LogMapOptions& opts = {});

// A g-orthonormal, positively oriented frame at x (Gram-Schmidt on the
// coordinate basis, last vector flipped if needed).
Mat orthonormal_frame(const MetricChart& chart, const Vec& x);

} // namespace riemcurv
