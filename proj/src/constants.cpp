#include "soblab/constants.hpp"

#include <cmath>

#include "soblab/specfun.hpp"

namespace soblab::constants {

using specfun::log_gamma;

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

double pprime_of(double p) { return p / (p - 1.0); }

}  // namespace

double log_omega(double d) { return specfun::log_unit_ball_volume(d); }

double log_aubin_talenti(int n, double p) {
    require(n >= 2, "aubin_talenti: n must be >= 2");
    require(p > 1.0 && p < n, "aubin_talenti: p must lie in (1, n)");
    const double pp = pprime_of(p);
    return -0.5 * std::log(M_PI) - std::log(static_cast<double>(n)) / p +
           std::log((p - 1.0) / (n - p)) / pp +
           (log_gamma(0.5 * n + 1.0) + log_gamma(n) - log_gamma(n / p) - log_gamma(n / pp + 1.0)) /
               n;
}

double aubin_talenti(int n, double p) { return std::exp(log_aubin_talenti(n, p)); }

double log_michael_simon(int n) {
    require(n >= 2, "michael_simon: n must be >= 2");
    return (n + 1) * std::log(4.0) - log_omega(n) / n;
}

double michael_simon(int n) { return std::exp(log_michael_simon(n)); }

BrendleC brendle_c(int n, int m) {
    require(n >= 2, "brendle_c: n must be >= 2");
    require(m >= 1, "brendle_c: m must be >= 1");
    BrendleC out;
    out.log_branch_codim =
        -std::log(static_cast<double>(n)) +
        (std::log(static_cast<double>(m)) + log_omega(m) - std::log(static_cast<double>(n + m)) -
         log_omega(n + m)) /
            n;
    out.log_branch_euclid = -std::log(static_cast<double>(n)) - log_omega(n) / n;
    out.branches_equal = std::abs(out.log_branch_codim - out.log_branch_euclid) <= 1e-12;
    out.active_branch = out.log_branch_codim > out.log_branch_euclid ? 1 : 2;
    out.log_value = std::max(out.log_branch_codim, out.log_branch_euclid);
    out.value = std::exp(out.log_value);
    return out;
}

double log_sobolev_s(int n, double p, bool permissive) {
    require(n >= 3, "sobolev_s: n must be >= 3");
    require(p < n, "sobolev_s: p must be < n");
    require(p > 1.0, "sobolev_s: p must be > 1");
    if (!permissive) require(p >= 2.0, "sobolev_s: p must be >= 2 (permissive flag extends to p > 1)");
    const double pp = pprime_of(p);
    const double pstar = p * n / (n - p);
    return std::log(pstar / n) + std::log1p(-1.0 / n) - std::log(p) / p -
           0.5 * std::log(2.0 * M_PI) + (1.0 / pp - 0.5) * (1.0 - std::log(static_cast<double>(n))) +
           (log_gamma(n) - log_gamma(n / p)) / n;
}

double sobolev_s(int n, double p, bool permissive) {
    return std::exp(log_sobolev_s(n, p, permissive));
}

double log_sobolev_s_tilde(int n, int m, double p, bool permissive) {
    require(n >= 2, "sobolev_s_tilde: n must be >= 2");
    require(m >= 1, "sobolev_s_tilde: m must be >= 1");
    require(p > 1.0 && p < n, "sobolev_s_tilde: p must lie in (1, n)");
    if (!permissive) {
        require(p <= 2.0, "sobolev_s_tilde: p must be <= 2 (permissive flag extends above)");
        if (n == 2) require(p < 2.0, "sobolev_s_tilde: p must be < 2 when n = 2");
    }
    const double pp = pprime_of(p);
    const double pstar = p * n / (n - p);
    return std::log(pstar / n) + std::log1p(-1.0 / n) - std::log(p) / p - std::log(pp) / pp +
           (log_omega(m) + log_gamma(m / pp + 1.0) - log_omega(n + m) -
            log_gamma((n + m) / pp + 1.0) + log_gamma(n) - log_gamma(n / p)) /
               n;
}

double sobolev_s_tilde(int n, int m, double p, bool permissive) {
    return std::exp(log_sobolev_s_tilde(n, m, p, permissive));
}

double log_talenti_normalizer(int n, int m, double p) {
    require(n >= 2, "talenti_normalizer: n must be >= 2");
    require(m >= 0, "talenti_normalizer: m must be >= 0");
    require(p > 1.0 && p < n, "talenti_normalizer: p must lie in (1, n)");
    const double pp = pprime_of(p);
    return std::log(static_cast<double>(n + m)) + log_omega(n + m) + log_gamma(n / p) +
           log_gamma((n + m) / pp) - std::log(pp) - log_gamma(n + m / pp);
}

double talenti_normalizer(int n, int m, double p) {
    return std::exp(log_talenti_normalizer(n, m, p));
}

double log_k_of_t(int n, int m, double p, double t) {
    require(n >= 2 && m >= 1, "k_of_t: requires n >= 2, m >= 1");
    require(p >= 2.0, "k_of_t: requires p >= 2");
    require(t > 0.0 && t < 1.0, "k_of_t: t must lie in (0,1)");
    const double pp = pprime_of(p);
    return log_omega(m) + log_gamma(m / pp + 1.0) - log_omega(m + n) -
           log_gamma((m + n) / pp + 1.0) +
           (0.5 - 1.0 / pp) * (m * std::log1p(-t) + n * std::log(t));
}

double k_of_t(int n, int m, double p, double t) { return std::exp(log_k_of_t(n, m, p, t)); }

double log_k_opt(int n, int m, double p) {
    require(n >= 2 && m >= 1, "k_opt: requires n >= 2, m >= 1");
    require(p >= 2.0, "k_opt: requires p >= 2");
    const double pp = pprime_of(p);
    const double total = static_cast<double>(n) + static_cast<double>(m);
    // t = n/(n+m): evaluate the log factors directly so m up to 1e6 stays exact
    return log_omega(m) + log_gamma(m / pp + 1.0) - log_omega(m + n) -
           log_gamma((m + n) / pp + 1.0) +
           (0.5 - 1.0 / pp) * (m * std::log(m / total) + n * std::log(n / total));
}

double k_opt(int n, int m, double p) { return std::exp(log_k_opt(n, m, p)); }

double log_k_limit(int n, double p) {
    require(n >= 2, "k_limit: n must be >= 2");
    require(p >= 2.0, "k_limit: requires p >= 2");
    const double pp = pprime_of(p);
    return (n / pp) * std::log(pp) - 0.5 * n * std::log(2.0 * M_PI) +
           n * (1.0 / pp - 0.5) * (1.0 - std::log(static_cast<double>(n)));
}

double k_limit(int n, double p) { return std::exp(log_k_limit(n, p)); }

long long nash_codim(int n, bool compact) {
    require(n >= 2, "nash_codim: n must be >= 2");
    const long long nn = n;
    if (compact) {
        const long long prod = 3LL * nn * (nn + 3);
        require(prod % 2 == 0, "nash_codim: parity violated");
        return prod / 2;
    }
    const long long prod = nn * (3 * nn * nn + 14 * nn + 9);
    require(prod % 2 == 0, "nash_codim: parity violated");
    return prod / 2;
}

double j_bound(int n, int m, double p) {
    require(n >= 2 && m >= 0, "j_bound: requires n >= 2, m >= 0");
    require(p > 1.0 && p < n, "j_bound: p must lie in (1, n)");
    return (n + m) * (p - 1.0) / (n - p);
}

YoungCap young_cap(double p, double t) {
    require(p > 1.0, "young_cap: p must be > 1");
    require(t > 0.0 && t <= 1.0, "young_cap: t must lie in (0,1]");
    const double pp = pprime_of(p);
    YoungCap out;
    out.cap = std::pow(t, 0.5 - 1.0 / pp) / (std::pow(p, 1.0 / p) * std::pow(pp, 1.0 / pp));
    out.argmax_j = (p / pp) * std::pow(t, pp / 2.0 - 1.0);
    return out;
}

LegacyConstants legacy_constants(int n, int m, double p) {
    require(m >= 1, "legacy_constants: m must be >= 1");
    require(p > 1.0 && p < n, "legacy_constants: p must lie in (1, n)");
    const BrendleC c = brendle_c(n, m);
    const double pstar = p * n / (n - p);
    LegacyConstants out;
    out.holder_route = pstar * (1.0 - 1.0 / n) * c.value;
    out.rearrangement_route =
        std::exp(std::log(static_cast<double>(n)) + log_omega(n) / n + c.log_value +
                 log_aubin_talenti(n, p));
    return out;
}

ChainReport compare_chain(int n) {
    require(n >= 3, "compare_chain: n must be >= 3");
    ChainReport r;
    r.n = n;
    r.m_compact = nash_codim(n, true);
    r.m_noncompact = nash_codim(n, false);
    r.log_ms = log_michael_simon(n);
    r.log_c_compact = brendle_c(n, static_cast<int>(r.m_compact)).log_value;
    r.log_c_noncompact = brendle_c(n, static_cast<int>(r.m_noncompact)).log_value;
    r.log_s = log_sobolev_s(n, 2.0);
    r.log_at = log_aubin_talenti(n, 2.0);
    r.strict = r.log_ms > r.log_c_compact && r.log_ms > r.log_c_noncompact &&
               r.log_c_compact > r.log_s && r.log_c_noncompact > r.log_s && r.log_s > r.log_at;
    return r;
}

}  // namespace soblab::constants
