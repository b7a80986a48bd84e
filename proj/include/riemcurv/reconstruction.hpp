#pragma once

#include "riemcurv/frenet.hpp"
#include "riemcurv/metric_chart.hpp"

#include <functional>
#include <vector>

namespace riemcurv {

// kappa_j(t) with optional analytic Taylor data; the fallback differentiates
// the value callback (one order of accuracy lost, documented).
struct KappaFunction {
    std::function<double(double)> value;
    std::function<Taylor(double, int)> taylor; // optional

    Taylor expand(double t, int order) const;
    static KappaFunction constant(double v);
    static KappaFunction polynomial(std::vector<double> coeffs); // c0 + c1 t + ...
};

struct CurvatureSpec {
    int m = 0;
    std::vector<KappaFunction> kappas; // kappa_0..kappa_{m-1}
    double t0 = 0.0;

    // Sampled positivity check of kappa_j, j <= m-2, over [t0-w, t0+w].
    void validate_positivity(double window, int samples = 41) const;
};

struct ReconstructionState {
    double t = 0.0;
    Vec x;
    Mat Y; // columns X_1..X_m
};

// Right-hand side of the first-order frame system:
//   dx^j/dt    = kappa_0 y_1^j
//   dy_1^j/dt  = kappa_0 kappa_1 y_2^j - kappa_0 Gamma^j_{hi} y_1^h y_1^i
//   dy_i^c/dt  = kappa_0 (kappa_i y_{i+1}^c - kappa_{i-1} y_{i-1}^c)
//                - kappa_0 Gamma^c_{ab} y_1^a y_i^b
//   dy_m^c/dt  = -kappa_0 kappa_{m-1} y_{m-1}^c - kappa_0 Gamma^c_{ab} y_1^a y_m^b
ReconstructionState frenet_rhs(const MetricChart& chart, const ReconstructionState& s,
                               const CurvatureSpec& spec);

struct ReconstructionResult {
    std::vector<double> t;
    std::vector<Vec> x;
    std::vector<Mat> frames;
    double max_orthonormality_drift = 0.0;
    bool exited_domain = false;

    // Uniformly subsampled curve view for re-measurement (spacing = thin * step).
    CurveProvider sampled_curve(int thin = 20) const;
};

struct ReconstructOptions {
    double step = 1e-3;
    bool reorthonormalize = false; // opt-in frame re-orthonormalization
};

// RK4 integration of frenet_rhs over [t0 - span, t0 + span]. frame0 must be
// g-orthonormal and positively oriented.
ReconstructionResult reconstruct(const MetricChart& chart, const Vec& x0,
                                 const Mat& frame0, const CurvatureSpec& spec,
                                 double span, const ReconstructOptions& opts = {});

// Admissible initial frame from prescribed chain vectors w_1..w_m (columns):
// checks g(w_i, w_j) = sum_h f^kappa_{hi}(t0) f^kappa_{hj}(t0) and returns the
// Gram-Schmidt frame of (w_1..w_{m-1}) completed by orientation. Throws
// IncompatibleDataError with the worst (i, j) residual on failure.
Mat initial_data_from_vectors(const MetricChart& chart, const Vec& x0, const Mat& w,
                              const CurvatureSpec& spec, double rel_tol = 1e-6);

} // namespace riemcurv
