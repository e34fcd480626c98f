#pragma once

#include <stdexcept>
#include <string>

namespace soblab::constants {

inline constexpr double kEndpointGuard = 1e-6;

// The triple (n, m, p); m = 0 is the ambient Euclidean case.
struct SobolevParams {
    int n;
    int m;
    double p;

    SobolevParams(int n_, int m_, double p_) : n(n_), m(m_), p(p_) {
        if (n < 2) throw std::domain_error("SobolevParams: n must be >= 2");
        if (m < 0) throw std::domain_error("SobolevParams: m must be >= 0");
        if (!(p >= 1.0 + kEndpointGuard && p <= n - kEndpointGuard))
            throw std::domain_error("SobolevParams: p must lie in (1, n) away from the endpoints");
    }
    double pprime() const { return p / (p - 1.0); }
    double pstar() const { return p * n / (n - p); }
};

// ln of the volume of the unit ball in R^d (real d).
double log_omega(double d);

// Aubin-Talenti constant of the Euclidean L^p-Sobolev inequality.
double log_aubin_talenti(int n, double p);
double aubin_talenti(int n, double p);

// Michael-Simon constant 4^{n+1} / omega_n^{1/n}.
double log_michael_simon(int n);
double michael_simon(int n);

struct BrendleC {
    double value;
    double log_value;
    double log_branch_codim;    // (1/n) ((m omega_m)/((n+m) omega_{n+m}))^{1/n} branch
    double log_branch_euclid;   // 1/(n omega_n^{1/n}) branch
    int active_branch;          // 1 = codimension branch, 2 = Euclidean branch
    bool branches_equal;        // within 1e-12 in the log domain
};
BrendleC brendle_c(int n, int m);

// Codimension-free constant of the p >= 2 minimal-submanifold inequality.
// permissive = true allows 1 < p < 2 for study.
double log_sobolev_s(int n, double p, bool permissive = false);
double sobolev_s(int n, double p, bool permissive = false);

// Constant of the 1 < p <= 2 inequality; permissive = true allows p > 2.
double log_sobolev_s_tilde(int n, int m, double p, bool permissive = false);
double sobolev_s_tilde(int n, int m, double p, bool permissive = false);

// Normalizer of the Talenti target density (1+|y|^{p'})^{-n-m/p'} on R^{n+m}.
double log_talenti_normalizer(int n, int m, double p);
double talenti_normalizer(int n, int m, double p);

// K_{m,n,p'}(t); requires p >= 2, t in (0,1).
double log_k_of_t(int n, int m, double p, double t);
double k_of_t(int n, int m, double p, double t);

// K at the optimal t = n/(n+m), and its m -> infinity limit.
double log_k_opt(int n, int m, double p);
double k_opt(int n, int m, double p);
double log_k_limit(int n, double p);
double k_limit(int n, double p);

// Nash embedding codimension bound (exact integer).
long long nash_codim(int n, bool compact);

// (n+m)(p-1)/(n-p); m = 0 gives the exact Euclidean value.
double j_bound(int n, int m, double p);

struct YoungCap {
    double cap;        // sup_J J^{1/p'} / (1 + t^{1-p'/2} J)
    double argmax_j;   // maximizing J
};
// t = 1 encodes the 1 < p <= 2 variant (maximum at J = p-1).
YoungCap young_cap(double p, double t);

// The two pre-existing constants: p*(1-1/n) C(n,m) and
// n omega_n^{1/n} C(n,m) AT(n,p).
struct LegacyConstants {
    double holder_route;        // p*(1-1/n) C(n,m)
    double rearrangement_route; // n omega_n^{1/n} C(n,m) AT(n,p)
};
LegacyConstants legacy_constants(int n, int m, double p);

struct ChainReport {
    int n;
    long long m_compact;
    long long m_noncompact;
    double log_ms;
    double log_c_compact;
    double log_c_noncompact;
    double log_s;
    double log_at;
    bool strict;  // MS > C(n,m_n) > S(n,2) > AT(n,2) for both Nash bounds
};
ChainReport compare_chain(int n);

}  // namespace soblab::constants
