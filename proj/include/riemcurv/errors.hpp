#pragma once

#include <stdexcept>
#include <string>

namespace riemcurv {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// g(x) failed a Cholesky factorization; downstream formulas need g > 0.
struct DegenerateMetricError : Error {
    using Error::Error;
};

// A finite-difference stencil would leave the chart domain.
struct StencilClippingError : Error {
    using Error::Error;
};

// The covariant chain T, nabla T, ... is rank deficient where independence
// is required; carries the first failing chain index.
struct NotFrenetError : Error {
    int failing_index = -1;
    NotFrenetError(const std::string& msg, int k) : Error(msg), failing_index(k) {}
};

// Shooting iteration for the log map did not converge.
struct NoConvergenceError : Error {
    using Error::Error;
};

// Initial-data vectors violate the Gram compatibility condition; carries
// the worst residual and its index pair.
struct IncompatibleDataError : Error {
    double residual = 0.0;
    int i = -1, j = -1;
    IncompatibleDataError(const std::string& msg, double r, int i_, int j_)
        : Error(msg), residual(r), i(i_), j(j_) {}
};

// Bad CLI/JSON configuration.
struct ConfigError : Error {
    using Error::Error;
};

} // namespace riemcurv
