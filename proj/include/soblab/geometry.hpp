#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace soblab::geometry {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct ImmersionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnknownSurfaceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A parametrized piece of an n-submanifold of R^{n+m}.  The map must be an
// immersion on the whole domain box.  Derivatives are analytic when set,
// otherwise central finite differences are used.
struct Chart {
    std::string name;
    int n = 0;  // submanifold dimension
    int m = 0;  // codimension
    std::vector<std::array<double, 2>> domain;  // axis-aligned box in R^n
    bool minimal = false;

    enum class BoundaryKind { closed, faces };
    BoundaryKind boundary_kind = BoundaryKind::faces;
    struct Face {
        int axis;
        bool upper;
    };
    // Declared boundary faces. Periodic seams and degenerate coordinate axes
    // (e.g. the center of a polar chart) are simply not listed.
    std::vector<Face> faces;

    std::function<Vec(const Vec&)> map;                       // u -> F(u) in R^{n+m}
    std::function<Mat(const Vec&)> jac;                       // (n+m) x n, optional
    std::function<std::vector<Vec>(const Vec&)> hess;         // n*n ambient vectors, optional

    bool has_analytic_derivatives() const { return static_cast<bool>(jac); }
    Mat jacobian(const Vec& u) const;            // analytic or finite-difference
    std::vector<Vec> hessian(const Vec& u) const;  // entry (i,j) at index i*n+j
    double extent(int axis) const { return domain[axis][1] - domain[axis][0]; }
};

// Pullback metric g_ij = <dF/du_i, dF/du_j>.  Throws ImmersionError when the
// matrix is not positive definite.
Mat induced_metric(const Chart& chart, const Vec& u);

// Orthonormal tangent basis, (n+m) x n, from modified Gram-Schmidt on the
// jacobian columns (with re-orthogonalization).
Mat tangent_frame(const Mat& jacobian);

// Orthonormal normal frame, (n+m) x m, seeded deterministically from the
// ambient coordinate axes.
Mat normal_frame(const Chart& chart, const Vec& u);
Mat normal_frame_from_tangent(const Mat& tangent);

// Normal-valued second fundamental form: II_ij = normal projection of
// d^2 F / du_i du_j, returned as n*n ambient vectors.
std::vector<Vec> second_fundamental_form(const Chart& chart, const Vec& u);

// Mean curvature vector H = g^{ij} II_ij (unnormalized trace; |H| = n on the
// unit n-sphere).
Vec mean_curvature(const Chart& chart, const Vec& u);

// Tangent ambient vector g^{ij} (df)_j dF/du_i, where df_chart is the gradient
// of the scalar field in chart coordinates.
Vec surface_gradient(const Chart& chart, const Vec& u, const Vec& df_chart);

// Catalog members: flat(n,m), catenoid, helicoid, enneper,
// holomorphic_graph_z2, sphere(n in {2,3}), disk.
// extent scales the parameter box of the non-compact members.
Chart catalog(const std::string& name, int n = 0, int m = 0, double extent = 1.0);

// A chart with a quadrature grid.  Nodes are the centers of a tensor grid of
// cells; all cached fields are evaluated at those nodes.
struct Patch {
    Chart chart;
    std::vector<int> cells;  // cells per axis (even, so a half-resolution grid exists)
    std::int64_t node_count = 0;
    double cell_volume = 0.0;

    bool fields_built = false;
    std::vector<Vec> coords;        // chart coordinates per node
    std::vector<Vec> points;        // ambient positions per node
    std::vector<double> sqrt_det_g;
    std::vector<Mat> metric;
    std::vector<Mat> metric_inv;
    std::vector<Mat> tangent;  // (n+m) x n orthonormal
    std::vector<Mat> normal;   // (n+m) x m orthonormal
    std::vector<Vec> mean_curv;

    Vec node_coord(std::int64_t index) const;
    // Populates the cached per-node fields (idempotent).  The parallel path
    // writes each node independently, so it matches the serial path exactly.
    void build_fields(bool parallel = true);
};

Patch make_patch(const Chart& chart, const std::vector<int>& cells);

// Writes "u..., x..., H..., sqrt_det_g" rows for external plotting.
void export_patch_csv(Patch& patch, const std::string& path);

}  // namespace soblab::geometry
