#include "soblab/quadrature.hpp"

#include <atomic>
#include <cmath>
#include <vector>

#include "soblab/parallel.hpp"
#include "soblab/specfun.hpp"

namespace soblab::quadrature {

namespace {

// Gauss-Kronrod 7-15 nodes and weights on [-1,1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkResult {
    double value;
    double error;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b, std::int64_t& evals) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double k15 = kWgk[7] * fc;
    double g7 = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        const double fsum = f(center - dx) + f(center + dx);
        k15 += kWgk[i] * fsum;
        if (i % 2 == 1) g7 += kWg[i / 2] * fsum;
    }
    evals += 15;
    k15 *= half;
    g7 *= half;
    return {k15, std::abs(k15 - g7)};
}

constexpr int kMaxDepth = 60;

double adapt(const std::function<double(double)>& f, double a, double b, double tol, int depth,
             double& err_acc, std::int64_t& evals, bool& exhausted) {
    const GkResult r = gk15(f, a, b, evals);
    if (r.error <= tol || r.error <= 1e-300) {
        err_acc += r.error;
        return r.value;
    }
    if (depth >= kMaxDepth) {
        exhausted = true;
        err_acc += r.error;
        return r.value;
    }
    const double mid = 0.5 * (a + b);
    return adapt(f, a, mid, 0.5 * tol, depth + 1, err_acc, evals, exhausted) +
           adapt(f, mid, b, 0.5 * tol, depth + 1, err_acc, evals, exhausted);
}

}  // namespace

QuadratureResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                              double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("integrate_1d: tol must be > 0");
    std::function<double(double)> g;
    double lo, hi;
    if (std::isinf(b)) {
        // r = a + t/(1-t) maps [0,1) onto [a, inf)
        g = [&f, a](double t) {
            const double om = 1.0 - t;
            // deep subdivision can land on t = 1 exactly; the integrand must
            // vanish at infinity for the integral to exist
            if (om <= 0.0) return 0.0;
            return f(a + t / om) / (om * om);
        };
        lo = 0.0;
        hi = 1.0;
    } else {
        g = f;
        lo = a;
        hi = b;
    }
    QuadratureResult res;
    bool exhausted = false;
    res.value = adapt(g, lo, hi, tol, 0, res.abs_error_estimate, res.evaluations, exhausted);
    const double budget = std::max(tol, tol * std::abs(res.value));
    if (exhausted && res.abs_error_estimate > 50.0 * budget)
        throw NonConvergenceError("integrate_1d: subdivision depth exhausted before tolerance");
    return res;
}

QuadratureResult integrate_radial(const std::function<double(double)>& rho, int d, double tol,
                                  double support_radius) {
    if (d < 1) throw std::invalid_argument("integrate_radial: d must be >= 1");
    const double shell = d * specfun::unit_ball_volume(d);
    auto g = [&rho, d](double r) { return rho(r * r) * std::pow(r, d - 1); };
    QuadratureResult inner = integrate_1d(g, 0.0, support_radius, tol / std::max(1.0, shell));
    inner.value *= shell;
    inner.abs_error_estimate *= shell;
    return inner;
}

namespace {

using geometry::Chart;
using geometry::Mat;
using geometry::Patch;
using geometry::Vec;

Vec grid_coord(const Chart& chart, const std::vector<int>& cells, std::int64_t index) {
    const int n = chart.n;
    Vec u(n);
    std::int64_t rem = index;
    for (int i = n - 1; i >= 0; --i) {
        const std::int64_t k = rem % cells[static_cast<std::size_t>(i)];
        rem /= cells[static_cast<std::size_t>(i)];
        const double h = chart.extent(i) / cells[static_cast<std::size_t>(i)];
        u[i] = chart.domain[static_cast<std::size_t>(i)][0] + (static_cast<double>(k) + 0.5) * h;
    }
    return u;
}

// Midpoint sum of integrand * sqrt(det g) on a cell-center grid.  Degenerate
// metric nodes are flagged (exceptions cannot leave the parallel loop) and
// reported afterwards.
double grid_sum(const Chart& chart, const std::vector<int>& cells,
                const std::function<double(const Vec&)>& integrand, std::int64_t& evals) {
    std::int64_t count = 1;
    double cellvol = 1.0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        count *= cells[i];
        cellvol *= chart.extent(static_cast<int>(i)) / cells[i];
    }
    std::atomic<bool> degenerate{false};
    const double sum = deterministic_sum(count, [&](std::int64_t idx) {
        const Vec u = grid_coord(chart, cells, idx);
        const Mat J = chart.jacobian(u);
        const double det = (J.transpose() * J).determinant();
        if (!(det > 1e-14)) {
            degenerate.store(true, std::memory_order_relaxed);
            return 0.0;
        }
        return integrand(u) * std::sqrt(det);
    });
    evals += count;
    if (degenerate.load())
        throw geometry::ImmersionError("integrate_patch: det g <= 1e-14 at a quadrature node");
    return sum * cellvol;
}

}  // namespace

PatchIntegral integrate_patch(const Patch& patch,
                              const std::function<double(const Vec&)>& integrand, double) {
    PatchIntegral out;
    std::vector<int> coarse_cells = patch.cells;
    for (int& c : coarse_cells) c /= 2;
    out.fine = grid_sum(patch.chart, patch.cells, integrand, out.evaluations);
    out.coarse = grid_sum(patch.chart, coarse_cells, integrand, out.evaluations);
    // midpoint composite is O(h^2); one Richardson step removes the leading term
    out.value = out.fine + (out.fine - out.coarse) / 3.0;
    out.abs_error_estimate = std::abs(out.fine - out.coarse) / 3.0;
    return out;
}

PatchIntegral integrate_boundary(const Patch& patch,
                                 const std::function<double(const Vec&)>& integrand) {
    const Chart& chart = patch.chart;
    if (chart.boundary_kind == Chart::BoundaryKind::closed)
        throw NoBoundaryError("integrate_boundary: patch is closed");
    if (chart.faces.empty())
        throw NoBoundaryError("integrate_boundary: no boundary faces declared");

    PatchIntegral out;
    const int n = chart.n;
    for (const auto& face : chart.faces) {
        const double u_fixed = chart.domain[static_cast<std::size_t>(face.axis)][face.upper ? 1 : 0];
        std::vector<int> free_axes;
        for (int i = 0; i < n; ++i)
            if (i != face.axis) free_axes.push_back(i);

        auto face_sum = [&](int halving) {
            std::int64_t count = 1;
            double cellvol = 1.0;
            std::vector<int> fc(free_axes.size());
            for (std::size_t i = 0; i < free_axes.size(); ++i) {
                fc[i] = patch.cells[static_cast<std::size_t>(free_axes[i])] / halving;
                count *= fc[i];
                cellvol *= chart.extent(free_axes[i]) / fc[i];
            }
            std::atomic<bool> degenerate{false};
            const double sum = deterministic_sum(count, [&](std::int64_t idx) {
                Vec u(n);
                std::int64_t rem = idx;
                for (int i = static_cast<int>(free_axes.size()) - 1; i >= 0; --i) {
                    const int axis = free_axes[static_cast<std::size_t>(i)];
                    const std::int64_t k = rem % fc[static_cast<std::size_t>(i)];
                    rem /= fc[static_cast<std::size_t>(i)];
                    const double h = chart.extent(axis) / fc[static_cast<std::size_t>(i)];
                    u[axis] = chart.domain[static_cast<std::size_t>(axis)][0] +
                              (static_cast<double>(k) + 0.5) * h;
                }
                u[face.axis] = u_fixed;
                const Mat J = chart.jacobian(u);
                Mat Jsub(J.rows(), free_axes.size());
                for (std::size_t i = 0; i < free_axes.size(); ++i)
                    Jsub.col(static_cast<Eigen::Index>(i)) = J.col(free_axes[i]);
                const double det = (Jsub.transpose() * Jsub).determinant();
                if (!(det > 1e-14)) {
                    degenerate.store(true, std::memory_order_relaxed);
                    return 0.0;
                }
                return integrand(u) * std::sqrt(det);
            });
            out.evaluations += count;
            if (degenerate.load())
                throw geometry::ImmersionError("integrate_boundary: degenerate face metric");
            return sum * cellvol;
        };

        out.fine += face_sum(1);
        out.coarse += face_sum(2);
    }
    out.value = out.fine + (out.fine - out.coarse) / 3.0;
    out.abs_error_estimate = std::abs(out.fine - out.coarse) / 3.0;
    return out;
}

}  // namespace soblab::quadrature
