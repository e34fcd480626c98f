#include "soblab/sobolev.hpp"

#include <cmath>
#include <random>

#include "soblab/optim.hpp"

namespace soblab::sobolev {

using geometry::Mat;

namespace {

double grad_norm_sq(const geometry::Chart& chart, const TestFunction& f, const Vec& u) {
    const Vec df = f.grad(u);
    const Mat g = geometry::induced_metric(chart, u);
    return df.dot(g.llt().solve(df));
}

}  // namespace

double lp_norm(const Patch& patch, const TestFunction& f, double q) {
    if (!(q > 0.0)) throw std::invalid_argument("lp_norm: q must be > 0");
    const auto integral = quadrature::integrate_patch(
        patch, [&](const Vec& u) { return std::pow(std::abs(f.value(u)), q); });
    return std::pow(integral.value, 1.0 / q);
}

double dirichlet_energy(const Patch& patch, const TestFunction& f, double p) {
    if (!(p > 1.0)) throw std::invalid_argument("dirichlet_energy: p must be > 1");
    const auto integral = quadrature::integrate_patch(
        patch, [&](const Vec& u) { return std::pow(grad_norm_sq(patch.chart, f, u), 0.5 * p); });
    return std::pow(integral.value, 1.0 / p);
}

QuotientReport sobolev_quotient(const Patch& patch, const TestFunction& f,
                                const SobolevParams& params, bool permissive) {
    if (!patch.chart.minimal)
        throw NonMinimalPatchError("sobolev_quotient: chart '" + patch.chart.name +
                                   "' is not flagged minimal");
    QuotientReport rep;
    rep.n = params.n;
    rep.m = params.m;
    rep.p = params.p;
    rep.permissive = permissive;

    const double pstar = params.pstar();
    const auto num = quadrature::integrate_patch(
        patch, [&](const Vec& u) { return std::pow(std::abs(f.value(u)), pstar); });
    const auto den = quadrature::integrate_patch(patch, [&](const Vec& u) {
        return std::pow(grad_norm_sq(patch.chart, f, u), 0.5 * params.p);
    });

    rep.lpstar_norm = std::pow(num.value, 1.0 / pstar);
    if (den.value < 1e-14) {
        rep.degenerate = true;
        return rep;
    }
    rep.dirichlet_p_norm = std::pow(den.value, 1.0 / params.p);
    rep.quotient = rep.lpstar_norm / rep.dirichlet_p_norm;
    rep.coarse_quotient =
        std::pow(num.coarse, 1.0 / pstar) / std::pow(den.coarse, 1.0 / params.p);
    rep.uncertainty = std::abs(rep.quotient - rep.coarse_quotient);
    rep.at_reference = constants::aubin_talenti(params.n, params.p);

    if (params.m == 0) {
        rep.bound = rep.at_reference;
        rep.bound_name = BoundName::AT_reference;
    } else if (params.p >= 2.0 && params.n >= 3) {
        rep.bound = constants::sobolev_s(params.n, params.p, permissive);
        rep.bound_name = BoundName::S;
        if (params.p == 2.0)
            rep.second_bound = constants::sobolev_s_tilde(params.n, params.m, 2.0, permissive);
    } else {
        rep.bound = constants::sobolev_s_tilde(params.n, params.m, params.p, permissive);
        rep.bound_name = BoundName::S_tilde;
    }
    rep.margin = rep.bound - rep.quotient;
    return rep;
}

TestFunction bubble(const Vec& center, double lambda, const SobolevParams& params, double r1,
                    double r2) {
    if (!(lambda > 0.0) || !(r2 > r1) || !(r1 > 0.0))
        throw std::invalid_argument("bubble: requires lambda > 0 and 0 < r1 < r2");
    const double pp = params.pprime();
    const double expo = (params.n - params.p) / params.p;
    auto profile = [=](double r) { return std::pow(1.0 + std::pow(r / lambda, pp), -expo); };
    auto profile_deriv = [=](double r) {
        const double s = std::pow(r / lambda, pp);
        return -expo * std::pow(1.0 + s, -expo - 1.0) * (pp / lambda) *
               std::pow(r / lambda, pp - 1.0);
    };
    auto cutoff = [=](double r) {
        if (r <= r1) return 1.0;
        if (r >= r2) return 0.0;
        const double z = (r - r1) / (r2 - r1);
        return 1.0 - z * z * z * (10.0 - 15.0 * z + 6.0 * z * z);
    };
    auto cutoff_deriv = [=](double r) {
        if (r <= r1 || r >= r2) return 0.0;
        const double z = (r - r1) / (r2 - r1);
        return -30.0 * z * z * (1.0 - z) * (1.0 - z) / (r2 - r1);
    };

    TestFunction f;
    f.value = [=](const Vec& u) {
        const double r = (u - center).norm();
        return profile(r) * cutoff(r);
    };
    f.grad = [=](const Vec& u) {
        const Vec d = u - center;
        const double r = d.norm();
        if (r < 1e-14 || r >= r2) return Vec(Vec::Zero(u.size()));
        const double dr = profile_deriv(r) * cutoff(r) + profile(r) * cutoff_deriv(r);
        return Vec(dr / r * d);
    };
    return f;
}

TestFunction seeded_bump(const geometry::Chart& chart, std::uint64_t seed, double margin) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int n = chart.n;
    Vec center(n), width(n);
    for (int i = 0; i < n; ++i) {
        const double lo = chart.domain[static_cast<std::size_t>(i)][0];
        const double ext = chart.extent(i);
        const double a = lo + margin * ext;
        const double b = lo + (1.0 - margin) * ext;
        const double w = (0.15 + 0.20 * unit(rng)) * (b - a);
        width[i] = w;
        center[i] = a + w + unit(rng) * ((b - a) - 2.0 * w);
    }
    TestFunction f;
    f.support_margin = margin;
    auto factor = [](double z) {
        const double t = 1.0 - z * z;
        return t > 0.0 ? t * t * t : 0.0;
    };
    auto factor_deriv = [](double z) {
        const double t = 1.0 - z * z;
        return t > 0.0 ? -6.0 * z * t * t : 0.0;
    };
    f.value = [=](const Vec& u) {
        double v = 1.0;
        for (int i = 0; i < n; ++i) v *= factor((u[i] - center[i]) / width[i]);
        return v;
    };
    f.grad = [=](const Vec& u) {
        Vec g(n);
        double prod = 1.0;
        std::vector<double> vals(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            vals[static_cast<std::size_t>(i)] = factor((u[i] - center[i]) / width[i]);
            prod *= vals[static_cast<std::size_t>(i)];
        }
        for (int i = 0; i < n; ++i) {
            const double z = (u[i] - center[i]) / width[i];
            double others = 1.0;
            for (int j = 0; j < n; ++j)
                if (j != i) others *= vals[static_cast<std::size_t>(j)];
            g[i] = others * factor_deriv(z) / width[i];
        }
        return g;
    };
    return f;
}

MaximizeResult maximize_quotient(const Patch& patch, const BubbleFamily& family,
                                 const SobolevParams& params, int budget) {
    if (!(family.lambda_hi > family.lambda_lo) || !(family.r2 > family.r1))
        throw EmptyFamilyError("maximize_quotient: empty admissible family");

    MaximizeResult result;
    result.argmax_center = 0.5 * (family.center_lo + family.center_hi);
    result.argmax_lambda = std::sqrt(family.lambda_lo * family.lambda_hi);

    auto evaluate = [&](const Vec& c, double lambda) {
        ++result.evaluations;
        const TestFunction f = bubble(c, lambda, params, family.r1, family.r2);
        const QuotientReport rep = sobolev_quotient(patch, f, params);
        if (rep.degenerate)
            throw EmptyFamilyError("maximize_quotient: family degenerated to a zero function");
        return rep;
    };

    result.best = evaluate(result.argmax_center, result.argmax_lambda);
    const int n = static_cast<int>(result.argmax_center.size());
    double prev = -1.0;
    while (result.evaluations < budget && result.best.quotient > prev * (1.0 + 1e-6)) {
        prev = result.best.quotient;
        {  // scale sweep
            auto [lam, q] = optim::golden_section_maximize(
                [&](double l) { return evaluate(result.argmax_center, l).quotient; },
                family.lambda_lo, family.lambda_hi,
                1e-3 * (family.lambda_hi - family.lambda_lo));
            result.argmax_lambda = lam;
            if (q > result.best.quotient) result.best = evaluate(result.argmax_center, lam);
        }
        for (int axis = 0; axis < n && result.evaluations < budget; ++axis) {
            if (family.center_hi[axis] - family.center_lo[axis] < 1e-12) continue;
            auto [ci, q] = optim::golden_section_maximize(
                [&](double c) {
                    Vec cand = result.argmax_center;
                    cand[axis] = c;
                    return evaluate(cand, result.argmax_lambda).quotient;
                },
                family.center_lo[axis], family.center_hi[axis],
                1e-3 * (family.center_hi[axis] - family.center_lo[axis]));
            result.argmax_center[axis] = ci;
            if (q > result.best.quotient)
                result.best = evaluate(result.argmax_center, result.argmax_lambda);
        }
        if (result.evaluations >= budget) {
            result.budget_exhausted = true;
            break;
        }
    }
    return result;
}

}  // namespace soblab::sobolev
