#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace riemcurv {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Finite-difference weights (Fornberg): for nodes x[0..n-1] and expansion
// point x0, returns w such that f^(order)(x0) ~= sum_i w[i] f(x[i]).
// Exact for polynomials of degree <= n-1.
Vec fd_weights(double x0, const Vec& nodes, int order);

// Derivatives d^k/ds^k f(s)|_{s=0} for k = 0..max_order of a scalar function
// on a symmetric uniform stencil with `points` nodes (points > max_order).
std::vector<double> fd_derivatives(const std::function<double(double)>& f,
                                   int max_order, double h, int points);

// Truncated Taylor polynomial around a fixed base point: c[k] = f^(k)(0)/k!.
// Supports the ring operations plus d/dt needed by the curvature recurrences.
class Taylor {
public:
    Taylor() = default;
    explicit Taylor(std::vector<double> coeffs) : c_(std::move(coeffs)) {}
    static Taylor constant(double v, int order);
    // From derivative values f, f', f'', ... (length order+1).
    static Taylor from_derivatives(const std::vector<double>& derivs);

    int order() const { return static_cast<int>(c_.size()) - 1; }
    double value() const { return c_.empty() ? 0.0 : c_[0]; }
    double coeff(int k) const { return k <= order() ? c_[k] : 0.0; }
    double derivative_value(int k) const; // f^(k)(0)

    Taylor derivative() const;            // one order lower
    Taylor truncated(int order) const;

    friend Taylor operator+(const Taylor& a, const Taylor& b);
    friend Taylor operator-(const Taylor& a, const Taylor& b);
    friend Taylor operator*(const Taylor& a, const Taylor& b);
    Taylor& operator+=(const Taylor& b) { *this = *this + b; return *this; }
    Taylor operator*(double s) const;

private:
    std::vector<double> c_;
};

// Numerical rank of a matrix: number of singular values > rel_tol * sigma_max.
int numerical_rank(const Mat& a, double rel_tol = 1e-8);

// sigma_min / sigma_max, 0 for an empty or zero matrix.
double singular_value_ratio(const Mat& a);

// Evaluates f on the 1-D stencil t = k*h, |k| <= points/2, and returns the
// derivative orders 0..max_order at t=0 for a vector-valued function.
std::vector<Vec> fd_vector_derivatives(const std::function<Vec(double)>& f,
                                       int max_order, double h, int points);

} // namespace riemcurv
