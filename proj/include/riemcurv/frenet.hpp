#pragma once

#include "riemcurv/curve.hpp"
#include "riemcurv/geometry.hpp"
#include "riemcurv/metric_chart.hpp"

#include <optional>
#include <vector>

namespace riemcurv {

// Covariant chain T, nabla T, ..., nabla^{count-1} T at the jet's base point,
// iterating (nabla^k T)^i = d/dt[(nabla^{k-1} T)^i] + Gamma^i_{jh} x_1^j
// (nabla^{k-1} T)^h with the time derivative realized through the jet
// coordinates. count defaults to jet order (its maximum).
std::vector<Vec> covariant_chain(const MetricChart& chart, const CurveJet& jet,
                                 int count = -1);

// Delta_k = det( g(chain_i, chain_j) )_{i,j=1..k} for k = 1..chain.size().
Vec gram_determinants(const MetricChart& chart, const Vec& x,
                      const std::vector<Vec>& chain);

struct CurvatureList {
    Vec kappas;           // kappa_0..kappa_{m-1}
    bool degenerate_last; // signed volume vanished; kappa_{m-1} set to 0
};

// kappa_0 = sqrt(Delta_1), kappa_i = eps_i sqrt(Delta_{i-1} Delta_{i+1}) /
// (sqrt(Delta_1) Delta_i) with Delta_0 = 1; eps_{m-1} carries the sign of the
// extended chain's volume. Requires Delta_k > 0 for k <= m-1.
CurvatureList curvatures(const Vec& deltas, double last_sign);

struct FrenetFrame {
    Mat frame;   // columns X_1..X_m
    Mat coframe; // rows omega^1..omega^m (dual basis)
};

// Gram-Schmidt on (T, ..., nabla^{m-2} T) plus the unique positively oriented
// unit completion. Throws NotFrenetError with the failing index on rank drop.
FrenetFrame frenet_frame(const MetricChart& chart, const Vec& x,
                         const std::vector<Vec>& chain);

struct FrenetResult {
    std::vector<Vec> chain; // nabla^k T, k = 0..m-1
    Vec deltas;             // Delta_1..Delta_m
    Vec kappas;             // kappa_0..kappa_{m-1}
    Mat frame;
    Mat coframe;
    Mat f; // upper-triangular f(i,j) = g(nabla^{j} T, X_{i+1}), 0-based
    bool degenerate_last = false;
};

// Full Frenet data at a jet of order >= m.
FrenetResult frenet_result(const MetricChart& chart, const CurveJet& jet);

// Curvature functions kappa_i(t) of a curve, i = 0..m-1.
Vec measure_kappas(const MetricChart& chart, const CurveProvider& curve, double t);

// f^kappa table from curvature Taylor expansions at t0 (der0/der recurrences).
// kappas[i] must have Taylor order >= m-1. Entry (i,j) is 0-based upper
// triangular; values are the table at t0.
Mat f_table_from_kappas(const std::vector<Taylor>& kappas, int m);
// Same, keeping the Taylor data of every entry.
std::vector<std::vector<Taylor>> f_table_taylor(const std::vector<Taylor>& kappas, int m);

// Rank test of (T, nabla T, ..., nabla^{m-2} T); jet order >= m-1.
bool is_frenet_jet(const MetricChart& chart, const CurveJet& jet, double tol = 1e-8);

// Plain derivative vectors of the curve read in numerically constructed
// normal coordinates centered at the jet's base point, k = 1..count.
std::vector<Vec> normal_derivative_vectors(const MetricChart& chart, const CurveJet& jet,
                                           int count);

// Rank test of (U^1, ..., U^{m-1}) in normal coordinates.
bool is_normal_position_jet(const MetricChart& chart, const CurveJet& jet,
                            double tol = 1e-8);

// sigma_min/sigma_max of the g-weighted chain matrix (diagnostic for the
// Frenet margin of a jet).
double frenet_margin(const MetricChart& chart, const CurveJet& jet);

} // namespace riemcurv
