#include "soblab/geometry.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "soblab/parallel.hpp"

namespace soblab::geometry {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kDetFloor = 1e-14;

Vec make_vec(std::initializer_list<double> xs) {
    Vec v(static_cast<int>(xs.size()));
    int i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

}  // namespace

Mat Chart::jacobian(const Vec& u) const {
    if (jac) return jac(u);
    const int d = n + m;
    Mat J(d, n);
    for (int i = 0; i < n; ++i) {
        const double h = std::cbrt(kEps) * (1.0 + std::abs(u[i]));
        Vec up = u, um = u;
        up[i] += h;
        um[i] -= h;
        J.col(i) = (map(up) - map(um)) / (2.0 * h);
    }
    return J;
}

std::vector<Vec> Chart::hessian(const Vec& u) const {
    if (hess) return hess(u);
    std::vector<Vec> H(static_cast<std::size_t>(n) * n);
    const double step_scale = std::pow(kEps, 0.25);
    const Vec f0 = map(u);
    for (int i = 0; i < n; ++i) {
        const double hi = step_scale * (1.0 + std::abs(u[i]));
        for (int j = i; j < n; ++j) {
            Vec d2;
            if (i == j) {
                Vec up = u, um = u;
                up[i] += hi;
                um[i] -= hi;
                d2 = (map(up) - 2.0 * f0 + map(um)) / (hi * hi);
            } else {
                const double hj = step_scale * (1.0 + std::abs(u[j]));
                Vec upp = u, upm = u, ump = u, umm = u;
                upp[i] += hi; upp[j] += hj;
                upm[i] += hi; upm[j] -= hj;
                ump[i] -= hi; ump[j] += hj;
                umm[i] -= hi; umm[j] -= hj;
                d2 = (map(upp) - map(upm) - map(ump) + map(umm)) / (4.0 * hi * hj);
            }
            H[static_cast<std::size_t>(i) * n + j] = d2;
            H[static_cast<std::size_t>(j) * n + i] = d2;
        }
    }
    return H;
}

Mat induced_metric(const Chart& chart, const Vec& u) {
    const Mat J = chart.jacobian(u);
    Mat g = J.transpose() * J;
    if (!(g.determinant() > kDetFloor))
        throw ImmersionError("induced metric is degenerate on chart '" + chart.name +
                             "' (det g <= 1e-14)");
    return g;
}

Mat tangent_frame(const Mat& jacobian) {
    Mat T = jacobian;
    const int n = static_cast<int>(T.cols());
    for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < i; ++j) T.col(i) -= T.col(j).dot(T.col(i)) * T.col(j);
            const double nrm = T.col(i).norm();
            if (!(nrm > 1e-12)) throw ImmersionError("tangent frame: jacobian is rank-deficient");
            T.col(i) /= nrm;
        }
    }
    return T;
}

Mat normal_frame_from_tangent(const Mat& tangent) {
    const int d = static_cast<int>(tangent.rows());
    const int n = static_cast<int>(tangent.cols());
    const int m = d - n;
    Mat N(d, m);
    int found = 0;
    for (int axis = 0; axis < d && found < m; ++axis) {
        Vec v = Vec::Zero(d);
        v[axis] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            v -= tangent * (tangent.transpose() * v);
            for (int j = 0; j < found; ++j) v -= N.col(j).dot(v) * N.col(j);
        }
        const double nrm = v.norm();
        if (nrm > 1e-6) N.col(found++) = v / nrm;
    }
    if (found < m) throw ImmersionError("normal frame: could not complete an orthonormal basis");
    return N;
}

Mat normal_frame(const Chart& chart, const Vec& u) {
    return normal_frame_from_tangent(tangent_frame(chart.jacobian(u)));
}

std::vector<Vec> second_fundamental_form(const Chart& chart, const Vec& u) {
    const Mat T = tangent_frame(chart.jacobian(u));
    std::vector<Vec> II = chart.hessian(u);
    for (auto& h : II) h -= T * (T.transpose() * h);
    return II;
}

Vec mean_curvature(const Chart& chart, const Vec& u) {
    const Mat g = induced_metric(chart, u);
    const Mat ginv = g.inverse();
    const std::vector<Vec> II = second_fundamental_form(chart, u);
    const int n = chart.n;
    Vec H = Vec::Zero(chart.n + chart.m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) H += ginv(i, j) * II[static_cast<std::size_t>(i) * n + j];
    return H;
}

Vec surface_gradient(const Chart& chart, const Vec& u, const Vec& df_chart) {
    const Mat J = chart.jacobian(u);
    Mat g = J.transpose() * J;
    if (!(g.determinant() > kDetFloor))
        throw ImmersionError("surface_gradient: degenerate metric");
    return J * g.inverse() * df_chart;
}

namespace {

Chart make_flat(int n, int m, double extent) {
    Chart c;
    c.name = "flat";
    c.n = n;
    c.m = m;
    c.minimal = true;
    for (int i = 0; i < n; ++i) c.domain.push_back({-extent, extent});
    for (int i = 0; i < n; ++i) {
        c.faces.push_back({i, false});
        c.faces.push_back({i, true});
    }
    const int d = n + m;
    c.map = [n, d](const Vec& u) {
        Vec x = Vec::Zero(d);
        x.head(n) = u;
        return x;
    };
    c.jac = [n, d](const Vec&) {
        Mat J = Mat::Zero(d, n);
        J.topLeftCorner(n, n).setIdentity();
        return J;
    };
    c.hess = [n, d](const Vec&) {
        return std::vector<Vec>(static_cast<std::size_t>(n) * n, Vec::Zero(d));
    };
    return c;
}

Chart make_catenoid(double extent) {
    Chart c;
    c.name = "catenoid";
    c.n = 2;
    c.m = 1;
    c.minimal = true;
    c.domain = {{-extent, extent}, {0.0, 2.0 * M_PI}};
    c.faces = {{0, false}, {0, true}};  // theta is a periodic seam
    c.map = [](const Vec& u) {
        const double s = u[0], t = u[1];
        return make_vec({std::cosh(s) * std::cos(t), std::cosh(s) * std::sin(t), s});
    };
    c.jac = [](const Vec& u) {
        const double s = u[0], t = u[1];
        Mat J(3, 2);
        J.col(0) = make_vec({std::sinh(s) * std::cos(t), std::sinh(s) * std::sin(t), 1.0});
        J.col(1) = make_vec({-std::cosh(s) * std::sin(t), std::cosh(s) * std::cos(t), 0.0});
        return J;
    };
    c.hess = [](const Vec& u) {
        const double s = u[0], t = u[1];
        const Vec fss = make_vec({std::cosh(s) * std::cos(t), std::cosh(s) * std::sin(t), 0.0});
        const Vec fst = make_vec({-std::sinh(s) * std::sin(t), std::sinh(s) * std::cos(t), 0.0});
        const Vec ftt = make_vec({-std::cosh(s) * std::cos(t), -std::cosh(s) * std::sin(t), 0.0});
        return std::vector<Vec>{fss, fst, fst, ftt};
    };
    return c;
}

Chart make_helicoid(double extent) {
    Chart c;
    c.name = "helicoid";
    c.n = 2;
    c.m = 1;
    c.minimal = true;
    c.domain = {{-extent, extent}, {0.0, 2.0 * M_PI}};
    c.faces = {{0, false}, {0, true}, {1, false}, {1, true}};
    c.map = [](const Vec& u) {
        const double a = u[0], v = u[1];
        return make_vec({a * std::cos(v), a * std::sin(v), v});
    };
    c.jac = [](const Vec& u) {
        const double a = u[0], v = u[1];
        Mat J(3, 2);
        J.col(0) = make_vec({std::cos(v), std::sin(v), 0.0});
        J.col(1) = make_vec({-a * std::sin(v), a * std::cos(v), 1.0});
        return J;
    };
    c.hess = [](const Vec& u) {
        const double a = u[0], v = u[1];
        const Vec faa = Vec::Zero(3);
        const Vec fav = make_vec({-std::sin(v), std::cos(v), 0.0});
        const Vec fvv = make_vec({-a * std::cos(v), -a * std::sin(v), 0.0});
        return std::vector<Vec>{faa, fav, fav, fvv};
    };
    return c;
}

Chart make_enneper(double extent) {
    Chart c;
    c.name = "enneper";
    c.n = 2;
    c.m = 1;
    c.minimal = true;
    c.domain = {{-extent, extent}, {-extent, extent}};
    c.faces = {{0, false}, {0, true}, {1, false}, {1, true}};
    c.map = [](const Vec& w) {
        const double u = w[0], v = w[1];
        return make_vec({u - u * u * u / 3.0 + u * v * v,
                         -(v - v * v * v / 3.0 + v * u * u), u * u - v * v});
    };
    c.jac = [](const Vec& w) {
        const double u = w[0], v = w[1];
        Mat J(3, 2);
        J.col(0) = make_vec({1.0 - u * u + v * v, -2.0 * u * v, 2.0 * u});
        J.col(1) = make_vec({2.0 * u * v, -(1.0 - v * v + u * u), -2.0 * v});
        return J;
    };
    c.hess = [](const Vec& w) {
        const double u = w[0], v = w[1];
        const Vec fuu = make_vec({-2.0 * u, -2.0 * v, 2.0});
        const Vec fuv = make_vec({2.0 * v, -2.0 * u, 0.0});
        const Vec fvv = make_vec({2.0 * u, 2.0 * v, -2.0});
        return std::vector<Vec>{fuu, fuv, fuv, fvv};
    };
    return c;
}

Chart make_holomorphic_graph(double extent) {
    Chart c;
    c.name = "holomorphic_graph_z2";
    c.n = 2;
    c.m = 2;
    c.minimal = true;
    c.domain = {{-extent, extent}, {-extent, extent}};
    c.faces = {{0, false}, {0, true}, {1, false}, {1, true}};
    c.map = [](const Vec& w) {
        const double x = w[0], y = w[1];
        return make_vec({x, y, x * x - y * y, 2.0 * x * y});
    };
    c.jac = [](const Vec& w) {
        const double x = w[0], y = w[1];
        Mat J(4, 2);
        J.col(0) = make_vec({1.0, 0.0, 2.0 * x, 2.0 * y});
        J.col(1) = make_vec({0.0, 1.0, -2.0 * y, 2.0 * x});
        return J;
    };
    c.hess = [](const Vec&) {
        const Vec fxx = make_vec({0.0, 0.0, 2.0, 0.0});
        const Vec fxy = make_vec({0.0, 0.0, 0.0, 2.0});
        const Vec fyy = make_vec({0.0, 0.0, -2.0, 0.0});
        return std::vector<Vec>{fxx, fxy, fxy, fyy};
    };
    return c;
}

Chart make_sphere2() {
    Chart c;
    c.name = "sphere";
    c.n = 2;
    c.m = 1;
    c.minimal = false;
    c.boundary_kind = Chart::BoundaryKind::closed;
    c.domain = {{0.0, M_PI}, {0.0, 2.0 * M_PI}};
    c.map = [](const Vec& u) {
        const double a = u[0], b = u[1];
        return make_vec({std::sin(a) * std::cos(b), std::sin(a) * std::sin(b), std::cos(a)});
    };
    c.jac = [](const Vec& u) {
        const double a = u[0], b = u[1];
        Mat J(3, 2);
        J.col(0) = make_vec({std::cos(a) * std::cos(b), std::cos(a) * std::sin(b), -std::sin(a)});
        J.col(1) = make_vec({-std::sin(a) * std::sin(b), std::sin(a) * std::cos(b), 0.0});
        return J;
    };
    c.hess = [map = c.map](const Vec& u) {
        const double a = u[0], b = u[1];
        const Vec faa = -map(u);
        const Vec fab = make_vec({-std::cos(a) * std::sin(b), std::cos(a) * std::cos(b), 0.0});
        const Vec fbb = make_vec({-std::sin(a) * std::cos(b), -std::sin(a) * std::sin(b), 0.0});
        return std::vector<Vec>{faa, fab, fab, fbb};
    };
    return c;
}

Chart make_sphere3() {
    Chart c;
    c.name = "sphere";
    c.n = 3;
    c.m = 1;
    c.minimal = false;
    c.boundary_kind = Chart::BoundaryKind::closed;
    c.domain = {{0.0, M_PI}, {0.0, M_PI}, {0.0, 2.0 * M_PI}};
    c.map = [](const Vec& u) {
        const double a = u[0], b = u[1], t = u[2];
        return make_vec({std::cos(a), std::sin(a) * std::cos(b),
                         std::sin(a) * std::sin(b) * std::cos(t),
                         std::sin(a) * std::sin(b) * std::sin(t)});
    };
    c.jac = [](const Vec& u) {
        const double a = u[0], b = u[1], t = u[2];
        Mat J(4, 3);
        J.col(0) = make_vec({-std::sin(a), std::cos(a) * std::cos(b),
                             std::cos(a) * std::sin(b) * std::cos(t),
                             std::cos(a) * std::sin(b) * std::sin(t)});
        J.col(1) = make_vec({0.0, -std::sin(a) * std::sin(b),
                             std::sin(a) * std::cos(b) * std::cos(t),
                             std::sin(a) * std::cos(b) * std::sin(t)});
        J.col(2) = make_vec({0.0, 0.0, -std::sin(a) * std::sin(b) * std::sin(t),
                             std::sin(a) * std::sin(b) * std::cos(t)});
        return J;
    };
    c.hess = [map = c.map](const Vec& u) {
        const double a = u[0], b = u[1], t = u[2];
        const double sa = std::sin(a), ca = std::cos(a);
        const double sb = std::sin(b), cb = std::cos(b);
        const double st = std::sin(t), ct = std::cos(t);
        const Vec faa = -map(u);
        const Vec fab = make_vec({0.0, -ca * sb, ca * cb * ct, ca * cb * st});
        const Vec fat = make_vec({0.0, 0.0, -ca * sb * st, ca * sb * ct});
        const Vec fbb = make_vec({0.0, -sa * cb, -sa * sb * ct, -sa * sb * st});
        const Vec fbt = make_vec({0.0, 0.0, -sa * cb * st, sa * cb * ct});
        const Vec ftt = make_vec({0.0, 0.0, -sa * sb * ct, -sa * sb * st});
        return std::vector<Vec>{faa, fab, fat, fab, fbb, fbt, fat, fbt, ftt};
    };
    return c;
}

Chart make_disk(double extent) {
    Chart c;
    c.name = "disk";
    c.n = 2;
    c.m = 1;
    c.minimal = true;
    c.domain = {{0.0, extent}, {0.0, 2.0 * M_PI}};
    c.faces = {{0, true}};  // the rim; theta is a seam, r = 0 is a degenerate center
    c.map = [](const Vec& u) {
        const double r = u[0], t = u[1];
        return make_vec({r * std::cos(t), r * std::sin(t), 0.0});
    };
    c.jac = [](const Vec& u) {
        const double r = u[0], t = u[1];
        Mat J(3, 2);
        J.col(0) = make_vec({std::cos(t), std::sin(t), 0.0});
        J.col(1) = make_vec({-r * std::sin(t), r * std::cos(t), 0.0});
        return J;
    };
    c.hess = [](const Vec& u) {
        const double r = u[0], t = u[1];
        const Vec frr = Vec::Zero(3);
        const Vec frt = make_vec({-std::sin(t), std::cos(t), 0.0});
        const Vec ftt = make_vec({-r * std::cos(t), -r * std::sin(t), 0.0});
        return std::vector<Vec>{frr, frt, frt, ftt};
    };
    return c;
}

}  // namespace

Chart catalog(const std::string& name, int n, int m, double extent) {
    if (name == "flat") {
        if (n < 2 || m < 0) throw UnknownSurfaceError("flat chart requires n >= 2, m >= 0");
        return make_flat(n, std::max(m, 0), extent);
    }
    if (name == "catenoid") return make_catenoid(extent);
    if (name == "helicoid") return make_helicoid(extent);
    if (name == "enneper") return make_enneper(extent);
    if (name == "holomorphic_graph_z2") return make_holomorphic_graph(extent);
    if (name == "disk") return make_disk(extent <= 0.0 ? 1.0 : extent);
    if (name == "sphere") {
        if (n == 0 || n == 2) return make_sphere2();
        if (n == 3) return make_sphere3();
        throw UnknownSurfaceError("sphere chart available for n in {2,3}");
    }
    throw UnknownSurfaceError("unknown catalog surface '" + name + "'");
}

Vec Patch::node_coord(std::int64_t index) const {
    const int n = chart.n;
    Vec u(n);
    std::int64_t rem = index;
    for (int i = n - 1; i >= 0; --i) {
        const std::int64_t k = rem % cells[i];
        rem /= cells[i];
        const double h = chart.extent(i) / cells[i];
        u[i] = chart.domain[i][0] + (static_cast<double>(k) + 0.5) * h;
    }
    return u;
}

void Patch::build_fields(bool parallel) {
    if (fields_built) return;
    const std::size_t count = static_cast<std::size_t>(node_count);
    coords.resize(count);
    points.resize(count);
    sqrt_det_g.resize(count);
    metric.resize(count);
    metric_inv.resize(count);
    tangent.resize(count);
    normal.resize(count);
    mean_curv.resize(count);
    const bool saved = parallel_enabled();
    parallel_enabled() = parallel;
    parallel_for(node_count, [&](std::int64_t idx) {
        const std::size_t i = static_cast<std::size_t>(idx);
        const Vec u = node_coord(idx);
        coords[i] = u;
        points[i] = chart.map(u);
        const Mat g = induced_metric(chart, u);
        metric[i] = g;
        metric_inv[i] = g.inverse();
        sqrt_det_g[i] = std::sqrt(g.determinant());
        const Mat T = tangent_frame(chart.jacobian(u));
        tangent[i] = T;
        normal[i] = normal_frame_from_tangent(T);
        mean_curv[i] = mean_curvature(chart, u);
    });
    parallel_enabled() = saved;
    fields_built = true;
}

Patch make_patch(const Chart& chart, const std::vector<int>& cells) {
    if (static_cast<int>(cells.size()) != chart.n)
        throw std::invalid_argument("make_patch: one cell count per chart axis required");
    Patch p;
    p.chart = chart;
    p.cells = cells;
    p.node_count = 1;
    p.cell_volume = 1.0;
    for (int i = 0; i < chart.n; ++i) {
        int c = cells[static_cast<std::size_t>(i)];
        if (c < 2) throw std::invalid_argument("make_patch: at least 2 cells per axis");
        if (c % 2 != 0) throw std::invalid_argument("make_patch: cell counts must be even");
        p.node_count *= c;
        p.cell_volume *= chart.extent(i) / c;
    }
    return p;
}

void export_patch_csv(Patch& patch, const std::string& path) {
    patch.build_fields();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_patch_csv: cannot open " + path);
    const int n = patch.chart.n, d = patch.chart.n + patch.chart.m;
    for (int i = 0; i < n; ++i) out << "u" << i << ",";
    for (int i = 0; i < d; ++i) out << "x" << i << ",";
    for (int i = 0; i < d; ++i) out << "H" << i << ",";
    out << "sqrt_det_g\n";
    for (std::size_t k = 0; k < static_cast<std::size_t>(patch.node_count); ++k) {
        for (int i = 0; i < n; ++i) out << patch.coords[k][i] << ",";
        for (int i = 0; i < d; ++i) out << patch.points[k][i] << ",";
        for (int i = 0; i < d; ++i) out << patch.mean_curv[k][i] << ",";
        out << patch.sqrt_det_g[k] << "\n";
    }
}

}  // namespace soblab::geometry
