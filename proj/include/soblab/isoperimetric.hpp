#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include "soblab/geometry.hpp"
#include "soblab/quadrature.hpp"
#include "soblab/sobolev.hpp"

namespace soblab::isoperimetric {

using geometry::Patch;
using geometry::Vec;

struct PositivityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Radial profile rho(s) on [0,1] (zero beyond), normalized so that
// int_{B^{n+m}} rho(|y|^2) dy = 1.
struct RadialDensity {
    std::string name;
    std::function<double(double)> profile;  // includes the normalizing constant
    int n = 0;
    int m = 0;
    double normalizer = 0.0;       // the constant c or c_j baked into profile
    bool endpoint_singular = false;  // 1/sqrt(1-s)-type blowup at s = 1
    // For endpoint-singular profiles: the finite factor rho(s) sqrt(1-s),
    // used with the sine substitution to avoid cancellation near s = 1.
    std::function<double(double)> regular;
};

// rho_j(s) = c_j s^j with c_j = (2j+n+m)/((n+m) omega_{n+m}).
RadialDensity power_density(int j, int n, int m);

// rho(s) = c/sqrt(1-s), c = 1/(pi omega_n), codimension m = 1.
RadialDensity sqrt_density(int n);

// Total mass int_{B^{n+m}} rho(|y|^2) dy by quadrature (uses the sine
// substitution for endpoint-singular profiles).
double density_mass(const RadialDensity& density, double tol = 1e-10);

// Normal-slice mass at tangential offset r:
//   m omega_m int_0^{sqrt(1-r^2)} rho(r^2+t^2) t^{m-1} dt.
double slice_mass(const RadialDensity& density, double r, double tol = 1e-11);

struct AlphaResult {
    double alpha;
    double argmax_r;
    double grid_max;       // best value seen on the scan grid
    double grid_min;       // smallest value on the scan grid (constancy diagnostics)
    int grid_points;
};

// alpha = sup over r in [0,1] of slice_mass, by dense grid scan (default 2048
// nodes) refined with golden-section.
AlphaResult alpha_of_density(const RadialDensity& density, int grid = 2048);

struct AlphaBounds {
    double lower;        // max{m omega_m/((n+m) omega_{n+m}), 1/omega_n}
    double branch_codim;
    double branch_euclid;
    int active_branch;   // 1 = codimension branch, 2 = 1/omega_n
    bool branches_equal;
};
AlphaBounds alpha_bounds(int n, int m);

struct Thm31Report {
    double lhs = 0.0;            // (int f^{n/(n-1)})^{(n-1)/n}
    double gradient_term = 0.0;  // int sqrt(|grad f|^2 + f^2 |H|^2)
    double boundary_term = 0.0;  // int_{boundary} f dsigma (0 when closed)
    double constant = 0.0;       // C(n,m)
    double rhs = 0.0;
    double ratio = 0.0;          // lhs / rhs
    bool pass = false;           // lhs <= rhs (with quadrature slack)
};

// Checks the isoperimetric inequality on a concrete patch for a strictly
// positive field f (enforced pointwise at the quadrature nodes, f >= 1e-8).
Thm31Report verify_thm31(const Patch& patch, const sobolev::TestFunction& f);

}  // namespace soblab::isoperimetric
