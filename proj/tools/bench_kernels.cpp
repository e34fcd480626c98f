#include <chrono>
#include <cmath>
#include <cstdio>

#include "soblab/geometry.hpp"
#include "soblab/isoperimetric.hpp"
#include "soblab/parallel.hpp"
#include "soblab/quadrature.hpp"
#include "soblab/sobolev.hpp"

using namespace soblab;

namespace {

template <class F>
double timed(F&& work) {
    const auto t0 = std::chrono::steady_clock::now();
    work();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

template <class F>
void bench(const char* name, F&& work) {
    double value_serial = 0.0, value_parallel = 0.0;
    parallel_enabled() = false;
    const double ts = timed([&] { value_serial = work(); });
    parallel_enabled() = true;
    const double tp = timed([&] { value_parallel = work(); });
    std::printf("%-28s serial %8.3fs  parallel %8.3fs  speedup %5.2fx  %s\n", name, ts, tp,
                ts / tp, value_serial == value_parallel ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main() {
    {
        geometry::Chart chart = geometry::catalog("catenoid", 0, 0, 1.0);
        geometry::Patch patch = geometry::make_patch(chart, {256, 256});
        bench("patch integral (catenoid)", [&] {
            return quadrature::integrate_patch(patch, [](const geometry::Vec& u) {
                       return std::exp(-u.squaredNorm());
                   })
                .value;
        });
    }
    {
        geometry::Chart chart = geometry::catalog("flat", 3, 1, 4.0);
        geometry::Patch patch = geometry::make_patch(chart, {48, 48, 48});
        const constants::SobolevParams params(3, 1, 2.0);
        const auto f = sobolev::bubble(geometry::Vec::Zero(3), 1.0, params, 2.5, 3.8);
        bench("dirichlet energy (flat R3)", [&] {
            return sobolev::dirichlet_energy(patch, f, 2.0);
        });
    }
    {
        const auto d = isoperimetric::power_density(100, 2, 3);
        bench("alpha grid scan (j=100)", [&] {
            return isoperimetric::alpha_of_density(d, 1024).alpha;
        });
    }
    {
        geometry::Chart chart = geometry::catalog("catenoid", 0, 0, 1.0);
        geometry::Patch patch = geometry::make_patch(chart, {32, 32});
        bench("patch field build", [&] {
            geometry::Patch p = patch;
            p.build_fields(parallel_enabled());
            double acc = 0.0;
            for (double v : p.sqrt_det_g) acc += v;
            return acc;
        });
    }
    return 0;
}
