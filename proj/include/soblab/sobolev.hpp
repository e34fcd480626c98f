#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "soblab/constants.hpp"
#include "soblab/geometry.hpp"
#include "soblab/quadrature.hpp"

namespace soblab::sobolev {

using constants::SobolevParams;
using geometry::Patch;
using geometry::Vec;

struct NonMinimalPatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptyFamilyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A compactly supported nonnegative field on the chart domain, given in chart
// coordinates with an analytic chart-coordinate gradient.
struct TestFunction {
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> grad;
    double support_margin = 0.0;  // guaranteed vanishing fraction of each axis
};

enum class BoundName { S, S_tilde, AT_reference };

struct QuotientReport {
    int n = 0, m = 0;
    double p = 0.0;
    double lpstar_norm = 0.0;
    double dirichlet_p_norm = 0.0;
    double quotient = 0.0;
    double bound = 0.0;
    BoundName bound_name = BoundName::S_tilde;
    double margin = 0.0;          // bound - quotient
    double second_bound = 0.0;    // the S-tilde value when p = 2 (coincides with S)
    double at_reference = 0.0;    // AT(n,p), for comparison reporting
    double coarse_quotient = 0.0; // quotient from the half-resolution sums
    double uncertainty = 0.0;     // |quotient - coarse_quotient|
    bool degenerate = false;      // Dirichlet energy below 1e-14
    bool permissive = false;
};

// (int |f|^q dvol)^{1/q}
double lp_norm(const Patch& patch, const TestFunction& f, double q);

// (int |grad^Sigma f|^p dvol)^{1/p}
double dirichlet_energy(const Patch& patch, const TestFunction& f, double p);

// Quotient with the applicable theorem bound: S(n,p) for p >= 2 (n >= 3),
// S-tilde(n,m,p) for p <= 2.  Throws NonMinimalPatchError when the chart is
// not flagged minimal.
QuotientReport sobolev_quotient(const Patch& patch, const TestFunction& f,
                                const SobolevParams& params, bool permissive = false);

// Talenti bubble (1 + |(u-c)/lambda|^{p'})^{-(n-p)/p} with a C^2 cutoff that
// is 1 inside radius r1 and 0 outside r2 (chart coordinates).
TestFunction bubble(const Vec& center, double lambda, const SobolevParams& params, double r1,
                    double r2);

// Seeded smooth bump supported strictly inside the chart domain:
// product of (1-z^2)^3 factors per axis.  margin is the vanishing fraction
// of each axis kept free on both sides.
TestFunction seeded_bump(const geometry::Chart& chart, std::uint64_t seed, double margin = 0.05);

struct BubbleFamily {
    Vec center_lo, center_hi;  // box of admissible centers (chart coordinates)
    double lambda_lo = 0.1, lambda_hi = 4.0;
    double r1, r2;  // cutoff radii
};

struct MaximizeResult {
    QuotientReport best;
    Vec argmax_center;
    double argmax_lambda = 0.0;
    int evaluations = 0;
    bool budget_exhausted = false;
};

// Coordinate ascent over (center, lambda): golden-section on lambda, axis-wise
// golden-section on the center.  Deterministic for a fixed budget.
MaximizeResult maximize_quotient(const Patch& patch, const BubbleFamily& family,
                                 const SobolevParams& params, int budget = 60);

}  // namespace soblab::sobolev
