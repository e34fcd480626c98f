#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>

#include "soblab/geometry.hpp"

namespace soblab::quadrature {

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::int64_t evaluations = 0;
};

struct NonConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoBoundaryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Adaptive Gauss-Kronrod (G7,K15) on [a,b]; b may be +infinity, in which case
// the tail is mapped by r = t/(1-t).  Subdivision depth is capped at 60;
// exhausting it without meeting the tolerance throws NonConvergenceError.
QuadratureResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                              double tol = 1e-10);

// int_{R^d} rho(|y|^2) dy = d * omega_d * int_0^R rho(r^2) r^{d-1} dr.
// R = support_radius (default: infinite).
QuadratureResult integrate_radial(const std::function<double(double)>& rho, int d,
                                  double tol = 1e-10, double support_radius = kInf);

struct PatchIntegral {
    double value = 0.0;               // Richardson-extrapolated midpoint value
    double abs_error_estimate = 0.0;  // |fine - coarse| / 3
    double fine = 0.0;                // raw midpoint sum on the patch grid
    double coarse = 0.0;              // raw midpoint sum on the half-resolution grid
    std::int64_t evaluations = 0;
};

// Tensor-product midpoint quadrature of integrand(u) * sqrt(det g) over the
// chart domain, on the patch grid and its half-resolution companion, combined
// by Richardson extrapolation.  Streams over nodes; does not require cached
// fields.  The node sum order is fixed, so the result is reproducible for a
// given grid regardless of threading.
PatchIntegral integrate_patch(const geometry::Patch& patch,
                              const std::function<double(const geometry::Vec&)>& integrand,
                              double tol = 1e-8);

// Integral of integrand over the declared boundary faces with the induced
// (n-1)-volume element.  Throws NoBoundaryError for closed patches or when no
// face is declared.
PatchIntegral integrate_boundary(const geometry::Patch& patch,
                                 const std::function<double(const geometry::Vec&)>& integrand);

}  // namespace soblab::quadrature
