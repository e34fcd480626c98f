#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "soblab/isoperimetric.hpp"
#include "soblab/specfun.hpp"

using namespace soblab;
using geometry::Vec;

namespace {

double omega(int d) { return specfun::unit_ball_volume(d); }

sobolev::TestFunction constant_field(int n, double c) {
    sobolev::TestFunction f;
    f.value = [c](const Vec&) { return c; };
    f.grad = [n](const Vec&) { return Vec(Vec::Zero(n)); };
    return f;
}

}  // namespace

TEST_CASE("density normalizers") {
    // c_1 for n = m = 2: (2+4)/(4 omega_4) = 3/pi^2
    const auto d = isoperimetric::power_density(1, 2, 2);
    CHECK(d.normalizer == doctest::Approx(3.0 / (M_PI * M_PI)).epsilon(1e-13));
    CHECK(d.profile(0.5) == doctest::Approx(d.normalizer * 0.5).epsilon(1e-13));
    CHECK(d.profile(1.5) == 0.0);

    const auto s = isoperimetric::sqrt_density(3);
    CHECK(s.m == 1);
    CHECK(s.endpoint_singular);
    CHECK(s.normalizer == doctest::Approx(1.0 / (M_PI * omega(3))).epsilon(1e-13));
}

TEST_CASE("densities integrate to one") {
    for (const auto& [j, n, m] : std::vector<std::array<int, 3>>{
             {1, 2, 1}, {1, 2, 2}, {3, 3, 2}, {10, 3, 3}, {100, 4, 5}}) {
        const auto d = isoperimetric::power_density(j, n, m);
        INFO("j=" << j << " n=" << n << " m=" << m);
        CHECK(isoperimetric::density_mass(d) == doctest::Approx(1.0).epsilon(1e-9));
    }
    for (int n : {2, 3, 6}) {
        const auto s = isoperimetric::sqrt_density(n);
        CHECK(isoperimetric::density_mass(s) == doctest::Approx(1.0).epsilon(1e-7));
    }
}

TEST_CASE("square-root profile has constant normal slices") {
    const int n = 3;
    const auto s = isoperimetric::sqrt_density(n);
    for (double r : {0.0, 0.3, 0.5, 0.9, 0.99})
        CHECK(isoperimetric::slice_mass(s, r) == doctest::Approx(1.0 / omega(n)).epsilon(1e-10));
    CHECK(isoperimetric::slice_mass(s, 1.1) == 0.0);

    const auto res = isoperimetric::alpha_of_density(s);
    CHECK(res.alpha == doctest::Approx(1.0 / omega(n)).epsilon(1e-10));
    CHECK(res.grid_max - res.grid_min <= 1e-10 * res.grid_max);
}

TEST_CASE("codimension-two power densities are exactly solvable") {
    // m = 2: slice mass at r = pi c_j (1-r^2)^{j+1} f(r)/..., sup at r = 0 with
    // value pi c_j / (j+1)
    for (int j : {1, 2, 5, 40}) {
        for (int n : {2, 3, 7}) {
            const auto d = isoperimetric::power_density(j, n, 2);
            const auto res = isoperimetric::alpha_of_density(d);
            INFO("j=" << j << " n=" << n);
            CHECK(res.alpha == doctest::Approx(M_PI * d.normalizer / (j + 1.0)).epsilon(1e-8));
            // the profile is 1 - r^{2j+2}: flat near r = 0, so only the value
            // is meaningful, not the argmax location
            CHECK(isoperimetric::slice_mass(d, res.argmax_r) ==
                  doctest::Approx(res.alpha).epsilon(1e-8));
        }
    }
}

TEST_CASE("alpha lower bounds and the large-j tail") {
    const auto b32 = isoperimetric::alpha_bounds(3, 2);
    CHECK(b32.branches_equal);
    const auto b21 = isoperimetric::alpha_bounds(2, 1);
    CHECK(b21.lower == doctest::Approx(1.0 / M_PI).epsilon(1e-13));
    CHECK(b21.active_branch == 2);
    const auto b35 = isoperimetric::alpha_bounds(3, 5);
    CHECK(b35.lower == doctest::Approx(5.0 * omega(5) / (8.0 * omega(8))).epsilon(1e-13));
    CHECK(b35.active_branch == 1);

    // m = 3: alpha_j decreases toward the codimension lower bound
    const auto bounds = isoperimetric::alpha_bounds(3, 3);
    double prev = std::numeric_limits<double>::infinity();
    for (int j : {1, 10, 100}) {
        const auto res = isoperimetric::alpha_of_density(isoperimetric::power_density(j, 3, 3));
        INFO("j=" << j);
        CHECK(res.alpha >= bounds.lower * (1.0 - 1e-10));
        CHECK(res.alpha < prev);
        prev = res.alpha;
    }
    CHECK(prev / bounds.lower - 1.0 <= 0.05);
}

TEST_CASE("isoperimetric inequality: sphere ratio one half") {
    geometry::Patch patch = geometry::make_patch(geometry::catalog("sphere", 2), {128, 128});
    const auto rep = isoperimetric::verify_thm31(patch, constant_field(2, 1.0));
    CHECK(rep.pass);
    CHECK(rep.boundary_term == 0.0);
    CHECK(rep.ratio == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("isoperimetric inequality: flat disk is extremal") {
    geometry::Patch patch = geometry::make_patch(geometry::catalog("disk"), {64, 64});
    const auto rep = isoperimetric::verify_thm31(patch, constant_field(2, 1.0));
    CHECK(rep.pass);
    CHECK(rep.gradient_term == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(rep.ratio == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("isoperimetric inequality on curved members with seeded fields") {
    for (const char* name : {"catenoid", "helicoid"}) {
        geometry::Chart chart = geometry::catalog(name);
        geometry::Patch patch = geometry::make_patch(chart, {48, 48});
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const auto bump = sobolev::seeded_bump(chart, seed);
            sobolev::TestFunction f;
            f.value = [bump](const Vec& u) { return 0.5 + bump.value(u); };
            f.grad = bump.grad;
            const auto rep = isoperimetric::verify_thm31(patch, f);
            INFO(name << " seed " << seed);
            CHECK(rep.pass);
            CHECK(rep.ratio < 1.0);
        }
    }
}

TEST_CASE("homogeneity: the ratio is scale invariant") {
    geometry::Chart chart = geometry::catalog("catenoid");
    geometry::Patch patch = geometry::make_patch(chart, {32, 32});
    const auto base = isoperimetric::verify_thm31(patch, constant_field(2, 1.0));
    for (double c : {1e-4, 7.0, 1e5}) {
        const auto rep = isoperimetric::verify_thm31(patch, constant_field(2, c));
        CHECK(rep.ratio == doctest::Approx(base.ratio).epsilon(1e-12));
    }
}

TEST_CASE("fields touching zero are rejected") {
    geometry::Chart chart = geometry::catalog("catenoid");
    geometry::Patch patch = geometry::make_patch(chart, {16, 16});
    const auto bump = sobolev::seeded_bump(chart, 4);  // vanishes near the boundary
    CHECK_THROWS_AS(isoperimetric::verify_thm31(patch, bump), isoperimetric::PositivityError);
}
