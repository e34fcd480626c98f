#include "soblab/isoperimetric.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "soblab/constants.hpp"
#include "soblab/optim.hpp"
#include "soblab/parallel.hpp"
#include "soblab/specfun.hpp"

namespace soblab::isoperimetric {

using quadrature::integrate_1d;

RadialDensity power_density(int j, int n, int m) {
    if (j < 1) throw std::domain_error("power_density: j must be >= 1");
    if (n < 2 || m < 1) throw std::domain_error("power_density: requires n >= 2, m >= 1");
    RadialDensity d;
    d.name = "power_j" + std::to_string(j);
    d.n = n;
    d.m = m;
    d.normalizer = (2.0 * j + n + m) / ((n + m) * specfun::unit_ball_volume(n + m));
    const double cj = d.normalizer;
    d.profile = [cj, j](double s) {
        if (s < 0.0 || s > 1.0) return 0.0;
        return cj * std::pow(s, j);
    };
    return d;
}

RadialDensity sqrt_density(int n) {
    if (n < 2) throw std::domain_error("sqrt_density: n must be >= 2");
    RadialDensity d;
    d.name = "sqrt_reciprocal";
    d.n = n;
    d.m = 1;
    d.endpoint_singular = true;
    d.normalizer = 1.0 / (M_PI * specfun::unit_ball_volume(n));
    const double c = d.normalizer;
    d.profile = [c](double s) {
        if (s < 0.0 || s >= 1.0) return 0.0;
        return c / std::sqrt(1.0 - s);
    };
    d.regular = [c](double s) { return s < 0.0 || s > 1.0 ? 0.0 : c; };
    return d;
}

double density_mass(const RadialDensity& density, double tol) {
    const int d = density.n + density.m;
    const double shell = d * specfun::unit_ball_volume(d);
    if (density.endpoint_singular) {
        // t = sin(phi): cos(phi) = sqrt(1-s) exactly, so the 1/sqrt(1-s)
        // blowup cancels against the jacobian with no subtraction involved
        auto g = [&](double phi) {
            const double t = std::sin(phi);
            return density.regular(t * t) * std::pow(t, d - 1);
        };
        return shell * integrate_1d(g, 0.0, 0.5 * M_PI, tol / shell).value;
    }
    auto g = [&](double t) { return density.profile(t * t) * std::pow(t, d - 1); };
    return shell * integrate_1d(g, 0.0, 1.0, tol / shell).value;
}

double slice_mass(const RadialDensity& density, double r, double tol) {
    const int m = density.m;
    const double shell = m * specfun::unit_ball_volume(m);
    const double rr = r * r;
    if (rr >= 1.0) return 0.0;
    const double T = std::sqrt(1.0 - rr);
    if (density.endpoint_singular) {
        // t = T sin(phi): T cos(phi) = sqrt(1-r^2-t^2) exactly, so the
        // singular factor cancels against the jacobian without cancellation
        auto g = [&](double phi) {
            const double t = T * std::sin(phi);
            return density.regular(rr + t * t) * std::pow(t, m - 1);
        };
        return shell * integrate_1d(g, 0.0, 0.5 * M_PI, tol).value;
    }
    auto g = [&](double t) { return density.profile(rr + t * t) * std::pow(t, m - 1); };
    return shell * integrate_1d(g, 0.0, T, tol).value;
}

AlphaResult alpha_of_density(const RadialDensity& density, int grid) {
    if (grid < 16) throw std::invalid_argument("alpha_of_density: grid too small");
    const double r_max = 1.0 - 1e-9;
    std::vector<double> values(static_cast<std::size_t>(grid) + 1);
    parallel_for(grid + 1, [&](std::int64_t k) {
        const double r = r_max * static_cast<double>(k) / grid;
        values[static_cast<std::size_t>(k)] = slice_mass(density, r);
    });
    AlphaResult out;
    out.grid_points = grid + 1;
    out.grid_max = values[0];
    out.grid_min = values[0];
    int best = 0;
    for (int k = 1; k <= grid; ++k) {
        const double v = values[static_cast<std::size_t>(k)];
        if (v > out.grid_max) {
            out.grid_max = v;
            best = k;
        }
        out.grid_min = std::min(out.grid_min, v);
    }
    const double lo = r_max * std::max(0, best - 1) / grid;
    const double hi = r_max * std::min(grid, best + 1) / grid;
    auto [r_star, alpha] = optim::golden_section_maximize(
        [&](double r) { return slice_mass(density, r); }, lo, hi, 1e-10);
    out.alpha = std::max(alpha, out.grid_max);
    out.argmax_r = alpha >= out.grid_max ? r_star : r_max * best / grid;
    return out;
}

AlphaBounds alpha_bounds(int n, int m) {
    if (n < 2 || m < 1) throw std::domain_error("alpha_bounds: requires n >= 2, m >= 1");
    AlphaBounds b;
    b.branch_codim = m * specfun::unit_ball_volume(m) /
                     ((n + m) * specfun::unit_ball_volume(n + m));
    b.branch_euclid = 1.0 / specfun::unit_ball_volume(n);
    b.lower = std::max(b.branch_codim, b.branch_euclid);
    b.branches_equal =
        std::abs(b.branch_codim - b.branch_euclid) <= 1e-12 * std::abs(b.lower);
    b.active_branch = b.branch_codim > b.branch_euclid ? 1 : 2;
    return b;
}

Thm31Report verify_thm31(const Patch& patch, const sobolev::TestFunction& f) {
    const auto& chart = patch.chart;
    if (chart.m < 1) throw std::domain_error("verify_thm31: chart must have codimension >= 1");
    const int n = chart.n;

    {  // strict positivity at the quadrature nodes
        std::vector<double> vals(static_cast<std::size_t>(patch.node_count));
        parallel_for(patch.node_count, [&](std::int64_t idx) {
            vals[static_cast<std::size_t>(idx)] = f.value(patch.node_coord(idx));
        });
        const double fmin = *std::min_element(vals.begin(), vals.end());
        if (!(fmin >= 1e-8))
            throw PositivityError("verify_thm31: f must satisfy f >= 1e-8 pointwise");
    }

    Thm31Report rep;
    const double q = static_cast<double>(n) / (n - 1);
    const auto lhs_int = quadrature::integrate_patch(
        patch, [&](const geometry::Vec& u) { return std::pow(f.value(u), q); });
    rep.lhs = std::pow(lhs_int.value, 1.0 / q);

    const auto grad_int = quadrature::integrate_patch(patch, [&](const geometry::Vec& u) {
        const geometry::Vec df = f.grad(u);
        const geometry::Mat g = geometry::induced_metric(chart, u);
        const double grad_sq = df.dot(g.llt().solve(df));
        const double fv = f.value(u);
        const double h = geometry::mean_curvature(chart, u).norm();
        return std::sqrt(grad_sq + fv * fv * h * h);
    });
    rep.gradient_term = grad_int.value;

    double boundary_err = 0.0;
    if (chart.boundary_kind == geometry::Chart::BoundaryKind::closed) {
        rep.boundary_term = 0.0;
    } else {
        const auto b = quadrature::integrate_boundary(
            patch, [&](const geometry::Vec& u) { return f.value(u); });
        rep.boundary_term = b.value;
        boundary_err = b.abs_error_estimate;
    }

    rep.constant = constants::brendle_c(n, chart.m).value;
    rep.rhs = rep.constant * (rep.gradient_term + rep.boundary_term);
    rep.ratio = rep.lhs / rep.rhs;
    const double slack = 1e-10 * (rep.lhs + rep.rhs) +
                         3.0 * (lhs_int.abs_error_estimate +
                                rep.constant * (grad_int.abs_error_estimate + boundary_err));
    rep.pass = rep.lhs <= rep.rhs + slack;
    return rep;
}

}  // namespace soblab::isoperimetric
