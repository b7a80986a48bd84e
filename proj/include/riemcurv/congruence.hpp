#pragma once

#include "riemcurv/errors.hpp"
#include "riemcurv/frenet.hpp"

#include <optional>
#include <string>
#include <vector>

namespace riemcurv {

// Frame components of nabla^j R at the jet's base point:
// values[(i_1..i_{j+3}), i] = (nabla^j R)(X_{i_1}, ..., X_{i_{j+3}}, omega^i),
// flat row-major with i fastest.
struct InvariantTuple {
    int j = 0;
    int dim = 0;
    std::vector<double> values;
    double max_abs() const;
};

std::vector<InvariantTuple> frame_invariants(const MetricChart& chart,
                                             const CurveJet& jet, int j_max);

// sup_t |kappa_i^A(t) - kappa_i^B(t)| over a sampled window around t0.
Vec kappa_jet_residuals(const MetricChart& chartA, const CurveProvider& curveA,
                        const MetricChart& chartB, const CurveProvider& curveB,
                        double t0, double window = 0.25, int samples = 51);

enum class CongruenceCriterion { general, symmetric, constant_curvature };
enum class Verdict { congruent, not_congruent, inconclusive };

struct CongruenceTolerances {
    double kappa = 1e-6;
    double tensor = 1e-5;
    double margin = 10.0; // not_congruent needs residual > margin * tol
};

struct CongruenceReport {
    Verdict verdict = Verdict::inconclusive;
    CongruenceCriterion criterion = CongruenceCriterion::general;
    int j_max = 0;
    Vec kappa_residuals;                         // per curvature order
    std::vector<InvariantTuple> tensor_residuals; // per j, |A - B| entrywise
    std::optional<double> isometry_transport_error;
    bool analytic_inputs = true; // false -> heuristic verdict on sampled data
    CongruenceTolerances tol;
    double window = 0.25;
    double worst_kappa() const;
    double worst_tensor() const;
};

struct CongruenceOptions {
    CongruenceCriterion criterion = CongruenceCriterion::general;
    int j_max = 2;
    double window = 0.25;
    int samples = 51;
    CongruenceTolerances tol;
    bool with_polar_check = false;
    double polar_window = 1.0; // wider than the kappa window; the deviation
                               // of non-congruent pairs can have high-order
                               // contact at t0
    int polar_samples = 21;
};

// The class assertion for symmetric / constant-curvature criteria is
// spot-checked on both manifolds; a failure raises ClassMismatchError.
struct ClassMismatchError : Error {
    using Error::Error;
};

CongruenceReport congruence_test(const MetricChart& chartA, const CurveProvider& curveA,
                                 const MetricChart& chartB, const CurveProvider& curveB,
                                 double t0, const CongruenceOptions& opts = {});

// Candidate isometry phi(y) = exp_{xbar0}(A log_{x0}(y)) with A the linear map
// sending frameA to frameB.
struct PolarMap {
    std::function<Vec(const Vec&)> map;
    Mat linear; // A in chart components
};

PolarMap polar_isometry(const MetricChart& chartA, const Vec& x0, const Mat& frameA,
                        const MetricChart& chartB, const Vec& xbar0, const Mat& frameB);

// sup over the window of |phi(sigma_A(t)) - sigma_B(t)| in chart-B coordinates.
double polar_transport_error(const PolarMap& polar, const CurveProvider& curveA,
                             const CurveProvider& curveB, double t0, double window,
                             int samples = 21);

enum class GramClass { interior, boundary, outside };

struct GramMapResult {
    Mat gram;                  // g(nabla^{h-1} T, nabla^{i-1} T), h, i = 1..r
    Vec leading_minors;        // det of the k x k corners
    double min_eigenvalue = 0;
    GramClass classification = GramClass::boundary;
};

// The Gram map into the cone of positive semidefinite symmetric matrices.
GramMapResult gram_map(const MetricChart& chart, const CurveJet& jet, int r,
                       double tol = 1e-10);

} // namespace riemcurv
