#pragma once

#include "riemcurv/curve.hpp"
#include "riemcurv/frenet.hpp"
#include "riemcurv/presets.hpp"

#include <random>

namespace riemcurv {

// A scalar function on J^r(R, M); eval must depend only on t0 and the
// coordinates up to the declared order.
struct JetFunction {
    int arity = 0;
    std::function<double(const CurveJet&)> eval;
    std::string label;
};

// Total derivative D_t: partials contracted with the shifted jet coordinates,
// (D_t f)(jet) = df/dt + sum_{k<=r} x_{k+1}^i df/dx_k^i. Output order +1.
JetFunction total_derivative(const JetFunction& f, double fd_step = 1e-6);

// (D_t)^n f realized through exact polynomial jet shifts and one high-order
// divided difference in the parameter (stable for n >= 2).
JetFunction dt_iterated(const JetFunction& f, int n);

// The curvature kappa_i as a jet function (arity i+1 for i < m-1, arity m for
// the signed last curvature).
JetFunction kappa_function(const MetricChart& chart, int i);

// Prolongation X^(r): slot j holds (D_t)^j applied to the components of the
// field along the jet's polynomial representative.
struct ProlongedField {
    int order = 0;
    int dim = 0;
    // rows j = 0..order, columns i = 1..m
    std::function<Mat(const CurveJet&)> eval;
};

ProlongedField prolong(const VectorFieldFn& field, int order, int dim);

// Numerical rank of { X^(r) : X in fields } at the jet (SVD threshold).
int distribution_rank(const std::vector<VectorFieldFn>& fields, int dim,
                      const CurveJet& jet, int r, double tol = 1e-8);

struct RankEstimate {
    int modal_rank = 0;
    double stability = 0.0; // fraction of samples at the modal rank
    int n_r = 0;            // m(r+1) + 1 - modal_rank
};

// Modal rank of the prolonged Killing distribution over random immersive
// jets; draws are generated serially so the result is independent of the
// thread count.
RankEstimate estimate_distribution_rank(const Preset& preset, int r, int samples,
                                        uint64_t seed, int threads = 1);

struct CountsRow {
    int r;
    int rank;
    double stability;
    int n_r;
    int k_r;
    bool flagged; // rank unstable across samples
};

// N_r / k_r table via k_r = N_r - 1 - sum_{i<r} (r+1-i) k_i.
std::vector<CountsRow> stability_and_counts(const Preset& preset, int r_max, int samples,
                                            uint64_t seed, int threads = 1);

// max over fields and jets of |X^(r) f| (directional derivative along the
// prolonged field in jet coordinates).
double invariance_check(const JetFunction& f, const std::vector<VectorFieldFn>& fields,
                        int dim, const std::vector<CurveJet>& jets);

// Random jet in the preset's chart; coordinates drawn from a fixed box with
// rejection of non-immersive (and optionally non-Frenet) draws.
CurveJet random_jet(const Preset& preset, int order, std::mt19937_64& rng,
                    bool require_frenet = false);

// Surface invariants (I1, I2, I3, I4) = (g(T,T), dK(X1), dK(X2),
// Hess_g K (X1, X1)) on a 2-dim chart. K defaults to the sectional curvature
// computed from the chart; presets with a closed form pass it explicitly.
Vec surface_invariants(const MetricChart& chart, const CurveJet& jet,
                       std::function<double(const Vec&)> gaussian_curvature = nullptr);

// Cleared variants (I1, sqrt(I1) I2, sqrt(I1) I3, I1 I4) as jet functions, for
// functional-independence Jacobians.
std::vector<JetFunction> surface_invariant_functions(
    const MetricChart& chart, std::function<double(const Vec&)> gaussian_curvature);

// (t, kappa~_0, I_1, kappa_1) on the g_kappa_tau preset: I_1 = g(Z, T) with
// Z = d/dz, kappa~_0 = g(T,T) - I_1^2.
Vec homogeneous3_invariants(const Preset& preset, const CurveJet& jet);
std::vector<JetFunction> homogeneous3_invariant_functions(const Preset& preset);

// Maurer-Cartan invariants (exp(-z) x1, exp(z) y1, z1) on the solvable preset.
Vec maurer_cartan_invariants(const Preset& preset, const CurveJet& jet);

// Jacobian of jet functions with respect to (t, x_0^i, ..., x_r^i); rows are
// functions, columns jet coordinates.
Mat jet_jacobian(const std::vector<JetFunction>& fs, const CurveJet& jet,
                 double step = 1e-4);

} // namespace riemcurv
