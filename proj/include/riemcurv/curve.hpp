#pragma once

#include "riemcurv/numerics.hpp"

#include <functional>
#include <map>
#include <string>

namespace riemcurv {

// A point of J^r(R, M): parameter t0 and derivative coordinates
// coords(k, i) = d^k (x^i o sigma) / dt^k at t0, k = 0..r.
struct CurveJet {
    double t0 = 0.0;
    Mat coords; // (r+1) x m
    std::string chart_label;

    int order() const { return static_cast<int>(coords.rows()) - 1; }
    int dim() const { return static_cast<int>(coords.cols()); }
    Vec point() const { return coords.row(0).transpose(); }
    Vec velocity() const { return coords.row(1).transpose(); }

    // Jet of the degree-r polynomial representative at t0 + s, same order.
    CurveJet shifted(double s) const;
    // Chart coordinates of the polynomial representative at t0 + s.
    Vec poly_point(double s) const;

    bool is_finite() const;
};

// A curve t -> point, with analytic jet callbacks when available and a
// divided-difference fallback otherwise.
class CurveProvider {
public:
    using EvalFn = std::function<Vec(double)>;
    using JetFn = std::function<CurveJet(double, int)>;

    CurveProvider() = default;
    CurveProvider(EvalFn eval, int dim, std::string chart_label = "",
                  double fd_step = 1e-3, int fd_points = 9);
    CurveProvider(EvalFn eval, JetFn jets, int dim, std::string chart_label = "",
                  bool analytic = true);

    int dim() const { return dim_; }
    // true when the jets come from closed-form derivatives rather than
    // divided differences of positions or samples
    bool has_analytic_jets() const { return analytic_ && static_cast<bool>(jets_); }
    const std::string& chart_label() const { return chart_label_; }

    Vec operator()(double t) const { return eval_(t); }
    // Jet of order r at t; analytic callback if present, else central
    // divided differences of the position (orders up to 6).
    CurveJet jet(double t, int order) const;

    double fd_step = 1e-3;
    int fd_points = 9;

private:
    EvalFn eval_;
    JetFn jets_;
    int dim_ = 0;
    std::string chart_label_;
    bool analytic_ = false;
};

// Named analytic curve presets for the CLI and the tests:
//   circle:            r, cx, cy, speed  (plane circle of radius r)
//   plane_circle:      kappa (geodesic curvature; radius 1/kappa)
//   helix:             a, b   ((a cos t, a sin t, b t))
//   line:              through origin with direction d1..dm
//   great_circle:      sphere-chart equator of curvature parameter k
//   torus_top_circle:  unit-speed circle at theta = pi/2 on the torus chart
CurveProvider make_curve_preset(const std::string& name,
                                const std::map<std::string, double>& params);

// Uniformly sampled curve (t strictly increasing, constant spacing); jets by
// finite differences on the sample grid.
CurveProvider make_sampled_curve(const std::vector<double>& t,
                                 const std::vector<Vec>& points,
                                 std::string chart_label = "");

CurveProvider load_curve_csv(const std::string& path, std::string chart_label = "");

// Curve pushed through a point map: t -> phi(sigma(t)); jets by high-order
// divided differences of the composition.
CurveProvider composed_curve(const CurveProvider& base,
                             const std::function<Vec(const Vec&)>& map, int dim,
                             double fd_step = 1e-2, int fd_points = 11);

} // namespace riemcurv
