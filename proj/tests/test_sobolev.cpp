#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "soblab/quadrature.hpp"
#include "soblab/sobolev.hpp"
#include "soblab/specfun.hpp"

using namespace soblab;
using geometry::Vec;

namespace {

sobolev::TestFunction one(int n) {
    sobolev::TestFunction f;
    f.value = [](const Vec&) { return 1.0; };
    f.grad = [n](const Vec&) { return Vec(Vec::Zero(n)); };
    return f;
}

sobolev::TestFunction scaled(const sobolev::TestFunction& f, double alpha) {
    sobolev::TestFunction g;
    g.value = [f, alpha](const Vec& u) { return alpha * f.value(u); };
    g.grad = [f, alpha](const Vec& u) { return Vec(alpha * f.grad(u)); };
    return g;
}

}  // namespace

TEST_CASE("norms of constants on known areas") {
    {
        geometry::Patch patch = geometry::make_patch(geometry::catalog("flat", 2, 0, 0.5), {8, 8});
        CHECK(sobolev::lp_norm(patch, one(2), 2.0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(sobolev::dirichlet_energy(patch, one(2), 2.0) ==
              doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    }
    {
        geometry::Patch patch = geometry::make_patch(geometry::catalog("sphere", 2), {64, 64});
        CHECK(sobolev::lp_norm(patch, one(2), 2.0) ==
              doctest::Approx(std::sqrt(4.0 * M_PI)).epsilon(1e-6));
    }
    {  // linear function on the unit square
        geometry::Patch patch = geometry::make_patch(geometry::catalog("flat", 2, 1, 0.5), {8, 8});
        sobolev::TestFunction lin;
        lin.value = [](const Vec& u) { return u[0]; };
        lin.grad = [](const Vec&) {
            Vec g(2);
            g << 1.0, 0.0;
            return g;
        };
        CHECK(sobolev::dirichlet_energy(patch, lin, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("truncated bubble norms match radial oracles") {
    const constants::SobolevParams params(3, 0, 2.0);
    geometry::Chart chart = geometry::catalog("flat", 3, 0, 12.0);
    geometry::Patch patch = geometry::make_patch(chart, {72, 72, 72});
    const auto f = sobolev::bubble(Vec::Zero(3), 1.0, params, 8.0, 11.0);

    auto cutoff = [](double r) {
        if (r <= 8.0) return 1.0;
        if (r >= 11.0) return 0.0;
        const double z = (r - 8.0) / 3.0;
        return 1.0 - z * z * z * (10.0 - 15.0 * z + 6.0 * z * z);
    };
    auto profile = [&](double r) { return std::pow(1.0 + r * r, -0.5) * cutoff(r); };

    {  // L^6 norm: radial oracle, and the untruncated closed form within 2%
        const double num = sobolev::lp_norm(patch, f, 6.0);
        const double radial =
            4.0 * M_PI *
            quadrature::integrate_1d([&](double r) { return std::pow(profile(r), 6.0) * r * r; },
                                     0.0, 11.0, 1e-12)
                .value;
        CHECK(num == doctest::Approx(std::pow(radial, 1.0 / 6.0)).epsilon(2e-3));
        const double closed = 4.0 * M_PI * specfun::radial_integral_closed({1.0, 2.0, 2.0, 3.0});
        CHECK(num == doctest::Approx(std::pow(closed, 1.0 / 6.0)).epsilon(0.02));
    }
    {  // Dirichlet energy against the radial oracle of the truncated profile
        const double den = sobolev::dirichlet_energy(patch, f, 2.0);
        auto cutoff_deriv = [](double r) {
            if (r <= 8.0 || r >= 11.0) return 0.0;
            const double z = (r - 8.0) / 3.0;
            return -30.0 * z * z * (1.0 - z) * (1.0 - z) / 3.0;
        };
        auto profile_deriv = [&](double r) {
            const double base = std::pow(1.0 + r * r, -0.5);
            const double dbase = -r * std::pow(1.0 + r * r, -1.5);
            return dbase * cutoff(r) + base * cutoff_deriv(r);
        };
        const double radial =
            4.0 * M_PI *
            quadrature::integrate_1d(
                [&](double r) {
                    const double d = profile_deriv(r);
                    return d * d * r * r;
                },
                0.0, 11.0, 1e-10)
                .value;
        CHECK(den == doctest::Approx(std::sqrt(radial)).epsilon(0.02));
    }
}

TEST_CASE("quotient report on the Euclidean patch") {
    const constants::SobolevParams params(3, 0, 2.0);
    // wide cutoff window so the Dirichlet tail and cutoff energy both stay small
    geometry::Chart chart = geometry::catalog("flat", 3, 0, 41.0);
    geometry::Patch patch = geometry::make_patch(chart, {180, 180, 180});
    const auto f = sobolev::bubble(Vec::Zero(3), 1.0, params, 8.0, 40.0);
    const auto rep = sobolev::sobolev_quotient(patch, f, params);

    CHECK(rep.bound_name == sobolev::BoundName::AT_reference);
    CHECK(rep.quotient < constants::aubin_talenti(3, 2.0) * 1.0001);
    CHECK(rep.quotient > 0.95 * constants::aubin_talenti(3, 2.0));
    CHECK(rep.quotient < constants::sobolev_s(3, 2.0));
}

TEST_CASE("quotient is invariant under scaling the field") {
    const constants::SobolevParams params(3, 0, 2.0);
    geometry::Chart chart = geometry::catalog("flat", 3, 0, 12.0);
    geometry::Patch patch = geometry::make_patch(chart, {48, 48, 48});
    const auto f = sobolev::bubble(Vec::Zero(3), 1.0, params, 8.0, 11.0);
    const auto rep = sobolev::sobolev_quotient(patch, f, params);
    for (double alpha : {1e-6, 1e6}) {
        const auto rep2 = sobolev::sobolev_quotient(patch, scaled(f, alpha), params);
        CHECK(rep2.quotient == doctest::Approx(rep.quotient).epsilon(1e-12));
    }
}

TEST_CASE("bound selection and the p = 2 coincidence") {
    const constants::SobolevParams params(3, 1, 2.0);
    geometry::Chart chart = geometry::catalog("flat", 3, 1, 6.0);
    geometry::Patch patch = geometry::make_patch(chart, {24, 24, 24});
    const auto f = sobolev::seeded_bump(chart, 5);
    const auto rep = sobolev::sobolev_quotient(patch, f, params);
    CHECK(rep.bound_name == sobolev::BoundName::S);
    CHECK(rep.second_bound == doctest::Approx(rep.bound).epsilon(1e-12));
    CHECK(rep.margin > 0.0);
}

TEST_CASE("minimal members certify against the small-p bound") {
    for (const char* name : {"catenoid", "holomorphic_graph_z2"}) {
        geometry::Chart chart = geometry::catalog(name);
        geometry::Patch patch = geometry::make_patch(chart, {48, 48});
        const constants::SobolevParams params(chart.n, chart.m, 1.5);
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const auto f = sobolev::seeded_bump(chart, seed);
            const auto rep = sobolev::sobolev_quotient(patch, f, params);
            INFO(name << " seed " << seed);
            CHECK(rep.bound_name == sobolev::BoundName::S_tilde);
            CHECK(rep.margin > 0.0);
            CHECK(rep.margin > 2.0 * rep.uncertainty);
        }
    }
}

TEST_CASE("non-minimal patches are rejected") {
    geometry::Patch patch = geometry::make_patch(geometry::catalog("sphere", 2), {16, 16});
    const constants::SobolevParams params(2, 1, 1.5);
    CHECK_THROWS_AS(sobolev::sobolev_quotient(patch, one(2), params),
                    sobolev::NonMinimalPatchError);
}

TEST_CASE("seeded bumps vanish near the boundary and are reproducible") {
    geometry::Chart chart = geometry::catalog("catenoid");
    const auto f = sobolev::seeded_bump(chart, 123);
    const auto g = sobolev::seeded_bump(chart, 123);
    Vec probe(2);
    probe << 0.3, 2.0;
    CHECK(f.value(probe) == g.value(probe));

    Vec edge(2);
    edge << -1.0, 0.0;
    CHECK(f.value(edge) == 0.0);
    edge << 1.0, 2.0 * M_PI;
    CHECK(f.value(edge) == 0.0);

    // analytic gradient vs finite differences
    for (double s : {0.1, -0.4}) {
        Vec u(2);
        u << s, 3.0;
        const Vec grad = f.grad(u);
        for (int i = 0; i < 2; ++i) {
            Vec up = u, um = u;
            up[i] += 1e-6;
            um[i] -= 1e-6;
            const double fd = (f.value(up) - f.value(um)) / 2e-6;
            CHECK(grad[i] == doctest::Approx(fd).scale(1.0).epsilon(1e-6));
        }
    }
}

TEST_CASE("quotient maximization over the bubble family") {
    geometry::Chart chart = geometry::catalog("catenoid");
    geometry::Patch patch = geometry::make_patch(chart, {32, 32});
    const constants::SobolevParams params(2, 1, 1.5);
    sobolev::BubbleFamily family;
    family.center_lo = Vec(2);
    family.center_hi = Vec(2);
    family.center_lo << -0.2, 2.5;
    family.center_hi << 0.2, 3.8;
    family.lambda_lo = 0.2;
    family.lambda_hi = 1.5;
    family.r1 = 0.5;
    family.r2 = 0.85;
    const auto res = sobolev::maximize_quotient(patch, family, params, 40);
    CHECK(res.best.quotient > 0.0);
    CHECK(res.best.quotient <= constants::sobolev_s_tilde(2, 1, 1.5));
    // the budget is enforced between sweeps, so one sweep of overshoot is fine
    CHECK(res.evaluations >= 1);
    CHECK(res.evaluations <= 40 + 25);

    sobolev::BubbleFamily empty = family;
    empty.lambda_hi = empty.lambda_lo;
    CHECK_THROWS_AS(sobolev::maximize_quotient(patch, empty, params, 10),
                    sobolev::EmptyFamilyError);
}

TEST_CASE("degenerate test functions are reported, not divided by") {
    geometry::Chart chart = geometry::catalog("flat", 3, 1, 1.0);
    geometry::Patch patch = geometry::make_patch(chart, {8, 8, 8});
    const constants::SobolevParams params(3, 1, 1.5);
    sobolev::TestFunction zero;
    zero.value = [](const Vec&) { return 0.0; };
    zero.grad = [](const Vec&) { return Vec(Vec::Zero(3)); };
    const auto rep = sobolev::sobolev_quotient(patch, zero, params);
    CHECK(rep.degenerate);
}
