#include "soblab/transport.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>

#include "soblab/parallel.hpp"

namespace soblab::transport {

namespace {

// 4-point Gauss-Legendre on [a,b]
double gauss4(const std::function<double(double)>& f, double a, double b) {
    static const double x[2] = {0.3399810435848562648, 0.8611363115940525752};
    static const double w[2] = {0.6521451548625461426, 0.3478548451374538574};
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int k = 0; k < 2; ++k) s += w[k] * (f(c - h * x[k]) + f(c + h * x[k]));
    return h * s;
}

std::vector<Vec> barycenters(const TransportPlan& plan) {
    const auto& src = plan.source;
    const auto& tgt = plan.target;
    const int d = src.ambient_dim;
    std::vector<Vec> ybar(src.size(), Vec::Zero(d));
    parallel_for(static_cast<std::int64_t>(src.size()), [&](std::int64_t i) {
        Vec acc = Vec::Zero(d);
        for (std::size_t j = 0; j < tgt.size(); ++j)
            acc += plan.coupling(i, static_cast<Eigen::Index>(j)) * tgt.points[j];
        ybar[static_cast<std::size_t>(i)] = acc / src.weights[static_cast<std::size_t>(i)];
    });
    return ybar;
}

}  // namespace

WeightedCloud sample_source(Patch& patch, const sobolev::TestFunction& f,
                            const SobolevParams& params, int N, std::uint64_t seed) {
    if (N < 2) throw std::invalid_argument("sample_source: N must be >= 2");
    patch.build_fields();
    const std::int64_t total = patch.node_count;
    const double pstar = params.pstar();

    // only nodes carrying mass participate; zero-weight nodes would produce
    // empty coupling rows and undefined barycenters
    std::vector<std::int64_t> idx;
    std::vector<double> weight;
    idx.reserve(static_cast<std::size_t>(total));
    for (std::int64_t i = 0; i < total; ++i) {
        const auto s = static_cast<std::size_t>(i);
        const double w = std::pow(f.value(patch.coords[s]), pstar) * patch.sqrt_det_g[s];
        if (w > 0.0) {
            idx.push_back(i);
            weight.push_back(w);
        }
    }
    if (static_cast<std::int64_t>(idx.size()) > N) {
        std::vector<std::size_t> order(idx.size());
        std::iota(order.begin(), order.end(), 0);
        std::mt19937_64 rng(seed);
        std::shuffle(order.begin(), order.end(), rng);
        order.resize(static_cast<std::size_t>(N));
        std::sort(order.begin(), order.end());
        std::vector<std::int64_t> idx2;
        std::vector<double> weight2;
        for (std::size_t o : order) {
            idx2.push_back(idx[o]);
            weight2.push_back(weight[o]);
        }
        idx.swap(idx2);
        weight.swap(weight2);
    }

    WeightedCloud cloud;
    cloud.ambient_dim = patch.chart.n + patch.chart.m;
    double mass = 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const auto s = static_cast<std::size_t>(idx[k]);
        cloud.points.push_back(patch.points[s]);
        cloud.coords.push_back(patch.coords[s]);
        cloud.tangent.push_back(patch.tangent[s]);
        cloud.weights.push_back(weight[k]);
        mass += weight[k];
    }
    if (!(mass > 1e-280))
        throw DegenerateSourceError("sample_source: total weight underflows");
    for (double& w : cloud.weights) w /= mass;
    return cloud;
}

WeightedCloud sample_target(const SobolevParams& params, int N, std::uint64_t seed,
                            int ambient_dim) {
    if (N < 1) throw std::invalid_argument("sample_target: N must be >= 1");
    const int d = params.n + params.m;
    if (ambient_dim == 0) ambient_dim = d;
    if (ambient_dim < d) throw std::invalid_argument("sample_target: ambient_dim < n+m");
    const double pp = params.pprime();
    const double expo = params.n + params.m / pp;
    auto pdf = [&](double r) {
        return std::pow(r, d - 1) * std::pow(1.0 + std::pow(r, pp), -expo);
    };

    // radial CDF on r = t/(1-t), t on a uniform grid
    const int knots = 4096;
    const double t_max = 1.0 - 1e-4;
    std::vector<double> r_knot(knots + 1), cdf(knots + 1, 0.0);
    for (int k = 0; k <= knots; ++k) {
        const double t = t_max * k / knots;
        r_knot[static_cast<std::size_t>(k)] = t / (1.0 - t);
    }
    for (int k = 1; k <= knots; ++k)
        cdf[static_cast<std::size_t>(k)] = cdf[static_cast<std::size_t>(k - 1)] +
                                           gauss4(pdf, r_knot[static_cast<std::size_t>(k - 1)],
                                                  r_knot[static_cast<std::size_t>(k)]);
    const double total = cdf[static_cast<std::size_t>(knots)];
    if (!(total > 0.0) || !std::isfinite(total))
        throw CdfError("sample_target: radial CDF construction failed");
    for (double& c : cdf) c /= total;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    WeightedCloud cloud;
    cloud.ambient_dim = ambient_dim;
    cloud.weights.assign(static_cast<std::size_t>(N), 1.0 / N);
    for (int i = 0; i < N; ++i) {
        const double u = unit(rng);
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const auto hi = std::min<std::size_t>(
            static_cast<std::size_t>(std::distance(cdf.begin(), it)), knots);
        const std::size_t lo = hi - 1;
        const double span = cdf[hi] - cdf[lo];
        const double frac = span > 0.0 ? (u - cdf[lo]) / span : 0.5;
        const double r = r_knot[lo] + frac * (r_knot[hi] - r_knot[lo]);

        Vec dir(d);
        double nrm = 0.0;
        do {
            for (int a = 0; a < d; ++a) dir[a] = gauss(rng);
            nrm = dir.norm();
        } while (nrm < 1e-12);
        Vec y = Vec::Zero(ambient_dim);
        y.head(d) = (r / nrm) * dir;
        cloud.points.push_back(y);
    }
    return cloud;
}

TransportPlan solve_plan(const WeightedCloud& source, const WeightedCloud& target,
                         double epsilon, double tol, int max_iter) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("solve_plan: epsilon must be > 0");
    if (source.ambient_dim != target.ambient_dim)
        throw std::invalid_argument("solve_plan: ambient dimension mismatch");
    const auto ns = static_cast<Eigen::Index>(source.size());
    const auto nt = static_cast<Eigen::Index>(target.size());

    Eigen::MatrixXd cost(ns, nt);
    parallel_for(ns, [&](std::int64_t i) {
        for (Eigen::Index j = 0; j < nt; ++j)
            cost(i, j) =
                0.5 * (source.points[static_cast<std::size_t>(i)] -
                       target.points[static_cast<std::size_t>(j)])
                          .squaredNorm();
    });

    std::vector<double> log_a(static_cast<std::size_t>(ns)), log_b(static_cast<std::size_t>(nt));
    for (Eigen::Index i = 0; i < ns; ++i)
        log_a[static_cast<std::size_t>(i)] = std::log(source.weights[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < nt; ++j)
        log_b[static_cast<std::size_t>(j)] = std::log(target.weights[static_cast<std::size_t>(j)]);

    std::vector<double> f(static_cast<std::size_t>(ns), 0.0),
        g(static_cast<std::size_t>(nt), 0.0);

    // pi_ij = a_i b_j exp((f_i + g_j - C_ij)/eps)
    auto lse_row = [&](Eigen::Index i) {
        double mx = -std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < nt; ++j)
            mx = std::max(mx, log_b[static_cast<std::size_t>(j)] +
                                  (g[static_cast<std::size_t>(j)] - cost(i, j)) / epsilon);
        double s = 0.0;
        for (Eigen::Index j = 0; j < nt; ++j)
            s += std::exp(log_b[static_cast<std::size_t>(j)] +
                          (g[static_cast<std::size_t>(j)] - cost(i, j)) / epsilon - mx);
        return mx + std::log(s);
    };
    auto lse_col = [&](Eigen::Index j) {
        double mx = -std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < ns; ++i)
            mx = std::max(mx, log_a[static_cast<std::size_t>(i)] +
                                  (f[static_cast<std::size_t>(i)] - cost(i, j)) / epsilon);
        double s = 0.0;
        for (Eigen::Index i = 0; i < ns; ++i)
            s += std::exp(log_a[static_cast<std::size_t>(i)] +
                          (f[static_cast<std::size_t>(i)] - cost(i, j)) / epsilon - mx);
        return mx + std::log(s);
    };
    auto dual_objective = [&]() {
        double lin = 0.0;
        for (Eigen::Index i = 0; i < ns; ++i)
            lin += source.weights[static_cast<std::size_t>(i)] * f[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < nt; ++j)
            lin += target.weights[static_cast<std::size_t>(j)] * g[static_cast<std::size_t>(j)];
        const double mass = deterministic_sum(ns, [&](std::int64_t i) {
            double s = 0.0;
            for (Eigen::Index j = 0; j < nt; ++j)
                s += std::exp(log_a[static_cast<std::size_t>(i)] +
                              log_b[static_cast<std::size_t>(j)] +
                              (f[static_cast<std::size_t>(i)] + g[static_cast<std::size_t>(j)] -
                               cost(i, j)) /
                                  epsilon);
            return s;
        });
        return lin - epsilon * (mass - 1.0);
    };

    TransportPlan plan;
    plan.epsilon = epsilon;
    plan.source = source;
    plan.target = target;

    double residual = std::numeric_limits<double>::infinity();
    int it = 0;
    const int trace_stride = 25;
    for (; it < max_iter; ++it) {
        parallel_for(nt, [&](std::int64_t j) {
            g[static_cast<std::size_t>(j)] = -epsilon * lse_col(static_cast<Eigen::Index>(j));
        });
        parallel_for(ns, [&](std::int64_t i) {
            f[static_cast<std::size_t>(i)] = -epsilon * lse_row(static_cast<Eigen::Index>(i));
        });
        // rows are now exact; measure the column marginals
        std::vector<double> col_err(static_cast<std::size_t>(nt));
        parallel_for(nt, [&](std::int64_t j) {
            double s = 0.0;
            for (Eigen::Index i = 0; i < ns; ++i)
                s += std::exp(log_a[static_cast<std::size_t>(i)] +
                              log_b[static_cast<std::size_t>(j)] +
                              (f[static_cast<std::size_t>(i)] + g[static_cast<std::size_t>(j)] -
                               cost(i, static_cast<Eigen::Index>(j))) /
                                  epsilon);
            col_err[static_cast<std::size_t>(j)] =
                std::abs(s - target.weights[static_cast<std::size_t>(j)]);
        });
        residual = *std::max_element(col_err.begin(), col_err.end());
        if (it % trace_stride == 0 || residual <= tol) plan.dual_trace.push_back(dual_objective());
        if (residual <= tol) {
            ++it;
            break;
        }
    }
    plan.iterations = it;
    plan.marginal_residual = residual;
    plan.converged = residual <= tol;
    for (std::size_t k = 1; k < plan.dual_trace.size(); ++k)
        if (plan.dual_trace[k] < plan.dual_trace[k - 1] - 1e-9 * std::abs(plan.dual_trace[k - 1]))
            plan.dual_monotone = false;

    // zero-mean source potential
    double mean_f = std::accumulate(f.begin(), f.end(), 0.0) / static_cast<double>(ns);
    for (double& v : f) v -= mean_f;
    for (double& v : g) v += mean_f;
    plan.dual_potential_source = f;
    plan.dual_potential_target = g;

    plan.coupling.resize(ns, nt);
    parallel_for(ns, [&](std::int64_t i) {
        for (Eigen::Index j = 0; j < nt; ++j)
            plan.coupling(i, j) =
                std::exp(log_a[static_cast<std::size_t>(i)] + log_b[static_cast<std::size_t>(j)] +
                         (f[static_cast<std::size_t>(i)] + g[static_cast<std::size_t>(j)] -
                          cost(i, j)) /
                             epsilon);
    });
    plan.cost = deterministic_sum(ns, [&](std::int64_t i) {
        double s = 0.0;
        for (Eigen::Index j = 0; j < nt; ++j) s += plan.coupling(i, j) * cost(i, j);
        return s;
    });
    return plan;
}

StructureReport tangential_structure_residual(const TransportPlan& plan, const Patch& patch,
                                              int k_neighbors) {
    const auto& src = plan.source;
    const auto N = src.size();
    if (static_cast<int>(N) <= k_neighbors)
        throw InsufficientNeighborsError("tangential_structure_residual: cloud too small");
    const int n = patch.chart.n;
    const auto ybar = barycenters(plan);

    // discrete potential u = |x|^2/2 - f
    std::vector<double> u(N);
    for (std::size_t i = 0; i < N; ++i)
        u[i] = 0.5 * src.points[i].squaredNorm() - plan.dual_potential_source[i];

    StructureReport rep;
    rep.residual.resize(N);
    std::vector<double> proj_err(N);
    parallel_for(static_cast<std::int64_t>(N), [&](std::int64_t ii) {
        const auto i = static_cast<std::size_t>(ii);
        // k nearest source nodes in chart coordinates
        std::vector<std::pair<double, std::size_t>> dist;
        dist.reserve(N - 1);
        for (std::size_t j = 0; j < N; ++j)
            if (j != i) dist.emplace_back((src.coords[j] - src.coords[i]).norm(), j);
        std::partial_sort(dist.begin(), dist.begin() + k_neighbors, dist.end());

        double h = 0.0;
        for (int k = 0; k < k_neighbors; ++k) h += dist[static_cast<std::size_t>(k)].first;
        h /= k_neighbors;

        Mat A = Mat::Zero(n, n);
        Vec b = Vec::Zero(n);
        for (int k = 0; k < k_neighbors; ++k) {
            const auto j = dist[static_cast<std::size_t>(k)].second;
            const Vec dc = src.coords[j] - src.coords[i];
            const double w = std::exp(-dc.squaredNorm() / (2.0 * h * h));
            A += w * dc * dc.transpose();
            b += w * (u[j] - u[i]) * dc;
        }
        const Vec du = A.ldlt().solve(b);  // chart-coordinate gradient of u
        const Vec grad_u = geometry::surface_gradient(patch.chart, src.coords[i], du);

        const Mat& T = src.tangent[i];
        const Vec yb = ybar[i];
        const Vec yt = T * (T.transpose() * yb);
        const Vec yn = yb - yt;
        proj_err[i] = std::abs(yb.squaredNorm() - yt.squaredNorm() - yn.squaredNorm());
        rep.residual[i] = (yt - grad_u).norm();
    });

    std::vector<double> sorted = rep.residual;
    std::sort(sorted.begin(), sorted.end());
    rep.median = sorted[N / 2];
    rep.p90 = sorted[static_cast<std::size_t>(0.9 * (N - 1))];
    rep.projector_identity_max = *std::max_element(proj_err.begin(), proj_err.end());
    return rep;
}

JEstimate estimate_J(const TransportPlan& plan, const SobolevParams& params) {
    const auto& src = plan.source;
    const auto& tgt = plan.target;
    const double pp = params.pprime();
    const auto ybar = barycenters(plan);

    JEstimate est;
    est.bound = constants::j_bound(params.n, params.m, params.p);
    est.j_hat = deterministic_sum(static_cast<std::int64_t>(src.size()), [&](std::int64_t ii) {
        const auto i = static_cast<std::size_t>(ii);
        const Mat& T = src.tangent[i];
        return src.weights[i] * std::pow((T.transpose() * ybar[i]).norm(), pp);
    });
    est.planwise_moment =
        deterministic_sum(static_cast<std::int64_t>(src.size()), [&](std::int64_t ii) {
            const auto i = static_cast<std::size_t>(ii);
            const Mat& T = src.tangent[i];
            double s = 0.0;
            for (std::size_t j = 0; j < tgt.size(); ++j)
                s += plan.coupling(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
                     std::pow((T.transpose() * tgt.points[j]).norm(), pp);
            return s;
        });
    return est;
}

}  // namespace soblab::transport
