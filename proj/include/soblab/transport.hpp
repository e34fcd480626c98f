#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "soblab/constants.hpp"
#include "soblab/geometry.hpp"
#include "soblab/sobolev.hpp"

namespace soblab::transport {

using constants::SobolevParams;
using geometry::Mat;
using geometry::Patch;
using geometry::Vec;

struct DegenerateSourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CdfError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InsufficientNeighborsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WeightedCloud {
    std::vector<Vec> points;       // ambient positions
    std::vector<double> weights;   // nonnegative, sum to 1
    // Populated for clouds sampled from a chart:
    std::vector<Vec> coords;       // chart coordinates
    std::vector<Mat> tangent;      // orthonormal tangent frame per point
    int ambient_dim = 0;

    std::size_t size() const { return points.size(); }
};

// Subsample of the patch quadrature nodes (uniform without replacement),
// weighted by f^{p*} sqrt(det g) and normalized.  Throws
// DegenerateSourceError when the total weight underflows.
WeightedCloud sample_source(Patch& patch, const sobolev::TestFunction& f,
                            const SobolevParams& params, int N, std::uint64_t seed);

// i.i.d. draws from the density proportional to (1+|y|^{p'})^{-(n+m/p')} on
// R^{n+m}: inverse-CDF sampling of the radial law (CDF tabulated by
// quadrature, monotone interpolation) times a uniform direction.
// ambient_dim > n+m pads the samples with trailing zeros.
WeightedCloud sample_target(const SobolevParams& params, int N, std::uint64_t seed,
                            int ambient_dim = 0);

struct TransportPlan {
    Eigen::MatrixXd coupling;                 // dense, row i = source point i
    std::vector<double> dual_potential_source;  // zero-mean
    std::vector<double> dual_potential_target;
    double epsilon = 0.0;
    double marginal_residual = 0.0;  // max column-marginal error (rows exact)
    int iterations = 0;
    bool converged = false;
    double cost = 0.0;               // sum_ij pi_ij |x_i - y_j|^2 / 2
    bool dual_monotone = true;       // sampled dual-objective trace never decreased
    std::vector<double> dual_trace;

    WeightedCloud source, target;
};

// Log-domain Sinkhorn with alternating dual updates until the column-marginal
// error drops below tol.  On max_iter exhaustion the plan is returned with
// converged = false and the residual as achieved.
TransportPlan solve_plan(const WeightedCloud& source, const WeightedCloud& target,
                         double epsilon, double tol = 1e-6, int max_iter = 30000);

struct StructureReport {
    std::vector<double> residual;   // per source point
    double median = 0.0;
    double p90 = 0.0;
    double projector_identity_max = 0.0;  // | |ybar|^2 - |P_T ybar|^2 - |P_N ybar|^2 |
};

// Compares the tangential part of the barycentric image ybar(x) with the
// surface gradient of the discrete potential u = |x|^2/2 - f, the latter
// fitted by weighted least squares over the k nearest source nodes in chart
// coordinates.
StructureReport tangential_structure_residual(const TransportPlan& plan, const Patch& patch,
                                              int k_neighbors = 12);

struct JEstimate {
    double j_hat = 0.0;            // sum_x w(x) |P_T ybar(x)|^{p'}
    double planwise_moment = 0.0;  // sum_xy pi(x,y) |P_T y|^{p'}
    double bound = 0.0;            // (n+m)(p-1)/(n-p)
};

JEstimate estimate_J(const TransportPlan& plan, const SobolevParams& params);

}  // namespace soblab::transport
