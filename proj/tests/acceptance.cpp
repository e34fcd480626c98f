// Acceptance gate: one numbered criterion per invocation, one pass/fail line.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "soblab/constants.hpp"
#include "soblab/geometry.hpp"
#include "soblab/isoperimetric.hpp"
#include "soblab/quadrature.hpp"
#include "soblab/sobolev.hpp"
#include "soblab/specfun.hpp"
#include "soblab/transport.hpp"

using namespace soblab;
using geometry::Vec;

namespace {

int failures = 0;

void require(bool ok, const std::string& what) {
    if (!ok) {
        ++failures;
        std::printf("  FAILED: %s\n", what.c_str());
    }
}

bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

sobolev::TestFunction constant_field(int n, double c) {
    sobolev::TestFunction f;
    f.value = [c](const Vec&) { return c; };
    f.grad = [n](const Vec&) { return Vec(Vec::Zero(n)); };
    return f;
}

// 1: constant identities
void criterion1() {
    for (int n = 3; n <= 50; ++n) {
        for (int m = 1; m <= 100; ++m)
            require(std::abs(constants::log_sobolev_s_tilde(n, m, 2.0) -
                             constants::log_sobolev_s(n, 2.0)) <= 1e-12,
                    "S-tilde(n,m,2) = S(n,2) at n=" + std::to_string(n) +
                        " m=" + std::to_string(m));
        const double factor = std::log((n - 1.0) / std::sqrt(n * (n - 2.0)));
        require(std::abs(constants::log_sobolev_s(n, 2.0) - factor -
                         constants::log_aubin_talenti(n, 2.0)) <= 1e-12,
                "S(n,2) vs AT(n,2) factor at n=" + std::to_string(n));
    }
    for (int n = 2; n <= 30; ++n)
        for (int m : {1, 7, 100})
            require(std::abs(constants::log_k_opt(n, m, 2.0) + 0.5 * n * std::log(M_PI)) <= 1e-12,
                    "K at p=2 independent of m, n=" + std::to_string(n));
}

// 2: strict chain with both Nash codimension bounds
void criterion2() {
    for (int n = 3; n <= 30; ++n) {
        const auto rep = constants::compare_chain(n);
        require(rep.strict, "chain strict at n=" + std::to_string(n));
        require(rep.log_ms > rep.log_c_compact && rep.log_c_compact > rep.log_s &&
                    rep.log_s > rep.log_at,
                "compact chain ordering at n=" + std::to_string(n));
        require(rep.log_ms > rep.log_c_noncompact && rep.log_c_noncompact > rep.log_s,
                "non-compact chain ordering at n=" + std::to_string(n));
    }
}

// 3: large-n and large-m asymptotics
void criterion3() {
    for (double p : {2.0, 3.0, 5.0}) {
        double prev = std::numeric_limits<double>::infinity();
        double last = 0.0;
        for (int n : {100, 1000, 10000, 1000000}) {
            const double ratio =
                std::exp(constants::log_sobolev_s(n, p) - constants::log_aubin_talenti(n, p));
            require(ratio > 1.0, "S/AT > 1 at n=" + std::to_string(n));
            require(ratio < prev, "S/AT decreasing at n=" + std::to_string(n));
            prev = ratio;
            last = ratio;
        }
        require(last <= 1.01, "S/AT limit at n=1e6, p=" + std::to_string(p));
    }
    for (const auto& [n, p] : std::vector<std::pair<int, double>>{{3, 3.0}, {4, 2.5}}) {
        const double limit = constants::k_limit(n, p);
        double prev = 0.0;
        for (int m : {1, 10, 100, 10000, 1000000}) {
            const double k = constants::k_opt(n, m, p);
            require(k > prev, "k_opt increasing at m=" + std::to_string(m));
            prev = k;
        }
        require(std::abs(prev / limit - 1.0) <= 1e-4, "k_opt limit at m=1e6");
    }
}

// 4: closed forms vs quadrature
void criterion4() {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 20; ++k) {
        const double lambda = 0.5 + 2.5 * u(rng);
        const double alpha = 1.5 + 2.5 * u(rng);
        const double beta = 2.0 * u(rng);
        const double gamma = (beta + 1.0) / alpha + 0.5 + 2.0 * u(rng);
        const specfun::RadialIntegralParams params(lambda, alpha, beta, gamma);
        const double closed = specfun::radial_integral_closed(params);
        const double quad =
            quadrature::integrate_1d(
                [&](double r) {
                    return std::pow(lambda + std::pow(r, alpha), -gamma) * std::pow(r, beta);
                },
                0.0, quadrature::kInf, 1e-12)
                .value;
        require(close_rel(closed, quad, 1e-10), "radial closed form, tuple " + std::to_string(k));
    }
    for (const auto& [n, m, p] : std::vector<std::array<double, 3>>{
             {2, 1, 1.5}, {3, 1, 2.0}, {3, 2, 2.0}, {3, 4, 1.5}, {4, 3, 3.0}}) {
        const double pp = p / (p - 1.0);
        const double expo = n + m / pp;
        const int d = static_cast<int>(n + m);
        const double quad =
            quadrature::integrate_radial(
                [&](double s) { return std::pow(1.0 + std::pow(s, 0.5 * pp), -expo); }, d, 1e-10)
                .value;
        const double closed =
            constants::talenti_normalizer(static_cast<int>(n), static_cast<int>(m), p);
        require(close_rel(closed, quad, 1e-8),
                "target normalizer (n,m,p) = (" + std::to_string(static_cast<int>(n)) + "," +
                    std::to_string(static_cast<int>(m)) + "," + std::to_string(p) + ")");
    }
}

// 5: the small-p crossover against the legacy constants
void criterion5() {
    {
        const auto legacy = constants::legacy_constants(3, 4, 1.5);
        const double st = constants::sobolev_s_tilde(3, 4, 1.5);
        require(st < legacy.holder_route && st < legacy.rearrangement_route,
                "new constant wins at (3,4,3/2)");
    }
    {
        const auto legacy = constants::legacy_constants(3, 4, 1.01);
        const double st = constants::sobolev_s_tilde(3, 4, 1.01);
        require(st > legacy.holder_route && st > legacy.rearrangement_route,
                "legacy constants win near p = 1");
    }
}

// 6: geometry invariants on the catalog
void criterion6() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unit(0.02, 0.98);
    auto sample = [&](const geometry::Chart& chart) {
        Vec u(chart.n);
        for (int i = 0; i < chart.n; ++i)
            u[i] = chart.domain[static_cast<std::size_t>(i)][0] + unit(rng) * chart.extent(i);
        return u;
    };
    for (const char* name : {"catenoid", "helicoid", "enneper", "holomorphic_graph_z2"}) {
        geometry::Chart chart = geometry::catalog(name);
        double worst = 0.0;
        for (int k = 0; k < 10000; ++k)
            worst = std::max(worst, geometry::mean_curvature(chart, sample(chart)).norm());
        require(worst <= 1e-6, std::string(name) + " mean curvature, worst " +
                                   std::to_string(worst));
    }
    for (int n : {2, 3}) {
        geometry::Chart sph = geometry::catalog("sphere", n);
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k)
            worst = std::max(worst,
                             std::abs(geometry::mean_curvature(sph, sample(sph)).norm() - n));
        require(worst <= 1e-8, "sphere(" + std::to_string(n) + ") umbilic mean curvature");
    }
    for (const char* name : {"catenoid", "enneper", "holomorphic_graph_z2"}) {
        geometry::Chart chart = geometry::catalog(name);
        const int d = chart.n + chart.m;
        for (int k = 0; k < 50; ++k) {
            const Vec u = sample(chart);
            const geometry::Mat jac = chart.jacobian(u);
            const geometry::Mat tan = geometry::tangent_frame(jac);
            const geometry::Mat nor = geometry::normal_frame_from_tangent(tan);
            const geometry::Mat proj = tan * tan.transpose() + nor * nor.transpose();
            require((proj - geometry::Mat::Identity(d, d)).cwiseAbs().maxCoeff() <= 1e-10,
                    std::string(name) + " projector identity");
            for (const Vec& ii : geometry::second_fundamental_form(chart, u))
                require((tan.transpose() * ii).norm() <= 1e-8,
                        std::string(name) + " II normality");
        }
    }
}

// 7: Euclidean quotient recovery by a truncated bubble
void criterion7() {
    const constants::SobolevParams params(3, 0, 2.0);
    geometry::Chart chart = geometry::catalog("flat", 3, 0, 41.0);
    geometry::Patch patch = geometry::make_patch(chart, {180, 180, 180});
    const auto f = sobolev::bubble(Vec::Zero(3), 1.0, params, 8.0, 40.0);
    const auto rep = sobolev::sobolev_quotient(patch, f, params);
    const double at = constants::aubin_talenti(3, 2.0);
    require(rep.quotient >= 0.95 * at,
            "quotient above 0.95 AT, got " + std::to_string(rep.quotient / at));
    require(rep.quotient <= 1.0001 * at, "quotient at most 1.0001 AT");
    require(rep.quotient < constants::sobolev_s(3, 2.0), "quotient strictly below S(3,2)");
}

// 8: seeded certification on minimal members
void criterion8() {
    for (const char* name : {"catenoid", "holomorphic_graph_z2"}) {
        geometry::Chart chart = geometry::catalog(name);
        geometry::Patch patch = geometry::make_patch(chart, {64, 64});
        const constants::SobolevParams params(chart.n, chart.m, 1.5);
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto f = sobolev::seeded_bump(chart, seed);
            const auto rep = sobolev::sobolev_quotient(patch, f, params);
            const std::string tag = std::string(name) + " seed " + std::to_string(seed);
            require(rep.margin > 0.0, tag + " margin positive");
            require(rep.margin > 2.0 * rep.uncertainty, tag + " margin exceeds 2x uncertainty");
        }
    }
}

// 9: slice functional of the radial densities
void criterion9() {
    {
        const int n = 3;
        const auto s = isoperimetric::sqrt_density(n);
        const auto res = isoperimetric::alpha_of_density(s);
        const double target = 1.0 / specfun::unit_ball_volume(n);
        require(res.grid_max - res.grid_min <= 1e-10 * res.grid_max,
                "sqrt profile slice constancy");
        require(close_rel(res.alpha, target, 1e-10), "sqrt profile alpha = 1/omega_n");
    }
    for (int j : {1, 2, 25}) {
        const auto d = isoperimetric::power_density(j, 3, 2);
        const auto res = isoperimetric::alpha_of_density(d);
        require(close_rel(res.alpha, M_PI * d.normalizer / (j + 1.0), 1e-8),
                "m=2 alpha exact at j=" + std::to_string(j));
    }
    const auto bounds = isoperimetric::alpha_bounds(3, 3);
    double last = 0.0;
    for (int j : {1, 10, 100, 1000}) {
        const auto res = isoperimetric::alpha_of_density(isoperimetric::power_density(j, 3, 3));
        require(res.alpha >= bounds.lower * (1.0 - 1e-10),
                "m=3 alpha above lower bound at j=" + std::to_string(j));
        const double upper = 3.0 * specfun::unit_ball_volume(3) *
                             isoperimetric::power_density(j, 3, 3).normalizer / (2.0 * j + 3.0);
        require(res.alpha <= upper * (1.0 + 1e-8),
                "m=3 alpha below upper bound at j=" + std::to_string(j));
        last = res.alpha;
    }
    require(last / bounds.lower - 1.0 <= 1e-2, "m=3 alpha tail at j=1000");
}

// 10: the isoperimetric inequality on concrete patches
void criterion10() {
    {
        geometry::Patch patch = geometry::make_patch(geometry::catalog("sphere", 2), {128, 128});
        const auto rep = isoperimetric::verify_thm31(patch, constant_field(2, 1.0));
        require(std::abs(rep.ratio - 0.5) <= 1e-6, "sphere ratio one half");
        require(rep.pass, "sphere inequality holds");
    }
    {
        geometry::Patch patch = geometry::make_patch(geometry::catalog("disk"), {64, 64});
        const auto rep = isoperimetric::verify_thm31(patch, constant_field(2, 1.0));
        require(std::abs(rep.ratio - 1.0) <= 1e-8, "flat disk extremal ratio");
        require(rep.pass, "disk inequality holds");
    }
    const std::vector<std::pair<std::string, int>> surfaces = {
        {"flat", 0},   {"catenoid", 0}, {"helicoid", 0}, {"enneper", 0},
        {"holomorphic_graph_z2", 0}, {"sphere", 2}, {"disk", 0}};
    for (const auto& [name, arg] : surfaces) {
        geometry::Chart chart = name == "flat" ? geometry::catalog("flat", 2, 1, 1.0)
                                : arg > 0      ? geometry::catalog(name, arg)
                                               : geometry::catalog(name);
        std::vector<int> cells(static_cast<std::size_t>(chart.n), 48);
        geometry::Patch patch = geometry::make_patch(chart, cells);
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto bump = sobolev::seeded_bump(chart, seed);
            sobolev::TestFunction f;
            f.value = [bump](const Vec& u) { return 0.5 + bump.value(u); };
            f.grad = bump.grad;
            const auto rep = isoperimetric::verify_thm31(patch, f);
            require(rep.pass,
                    name + " seeded field " + std::to_string(seed) + " satisfies the inequality");
        }
    }
}

// 11: seeded transport experiment on the catenoid
void criterion11() {
    geometry::Chart chart = geometry::catalog("catenoid");
    geometry::Patch patch = geometry::make_patch(chart, {32, 32});
    const constants::SobolevParams params(2, 1, 1.5);
    const auto bump = sobolev::seeded_bump(chart, 7);
    sobolev::TestFunction f;
    f.value = [bump](const Vec& u) { return 0.2 + bump.value(u); };
    f.grad = bump.grad;
    auto source = transport::sample_source(patch, f, params, 500, 7);
    auto target = transport::sample_target(params, 500, 8);

    // The dual potential obeys grad f(x) = x - ybar(x) exactly at every
    // epsilon, so the structure residual is the potential-differentiation
    // error: it shrinks strictly as the entropic smoothing grows.
    double prev = 0.0;
    for (double eps : {0.1, 0.05, 0.025}) {
        const auto plan = transport::solve_plan(source, target, eps, 1e-6);
        require(plan.converged, "Sinkhorn converged at eps " + std::to_string(eps));
        require(plan.marginal_residual <= 1e-6, "marginal residual at eps " + std::to_string(eps));
        const auto rep = transport::tangential_structure_residual(plan, patch);
        require(rep.projector_identity_max <= 1e-12, "projector identity");
        require(rep.median > prev,
                "structure residual strictly ordered across the sweep, eps " + std::to_string(eps));
        prev = rep.median;
    }

    const auto plan = transport::solve_plan(source, target, 0.01, 1e-6);
    require(plan.converged && plan.marginal_residual <= 1e-6, "final plan converged");
    const auto est = transport::estimate_J(plan, params);
    require(std::abs(est.bound - 3.0) <= 1e-12, "moment bound value");
    require(est.j_hat <= 3.1, "J estimate at most 3.1, got " + std::to_string(est.j_hat));
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: acceptance <criterion 1..11>\n");
        return 2;
    }
    const int c = std::atoi(argv[1]);
    void (*criteria[])() = {criterion1, criterion2, criterion3, criterion4,
                            criterion5, criterion6, criterion7, criterion8,
                            criterion9, criterion10, criterion11};
    if (c < 1 || c > 11) {
        std::fprintf(stderr, "usage: acceptance <criterion 1..11>\n");
        return 2;
    }
    criteria[c - 1]();
    std::printf("criterion %d: %s\n", c, failures == 0 ? "pass" : "FAIL");
    return failures == 0 ? 0 : 1;
}
