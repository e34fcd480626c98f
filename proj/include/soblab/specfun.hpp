#pragma once

#include <stdexcept>

namespace soblab::specfun {

// ln Gamma(x) for x > 0.  Lanczos approximation (g = 7, 9 terms), with the
// recursion ln Gamma(x) = ln Gamma(x+1) - ln x below x = 0.5.
// Throws std::domain_error for x <= 0.
double log_gamma(double x);

// ln of the volume of the unit ball in R^d, d may be any positive real:
// (d/2) ln(pi) - ln Gamma(d/2 + 1).
double log_unit_ball_volume(double d);

// omega_d for integer d >= 1.  Throws std::domain_error for d < 1.
double unit_ball_volume(int d);

// Parameters of the closed-form radial integral
//   int_0^inf (lambda + r^alpha)^{-gamma} r^beta dr.
struct RadialIntegralParams {
    double lambda;
    double alpha;
    double beta;
    double gamma;

    RadialIntegralParams(double lambda_, double alpha_, double beta_, double gamma_)
        : lambda(lambda_), alpha(alpha_), beta(beta_), gamma(gamma_) {
        if (!(lambda > 0.0)) throw std::domain_error("radial integral: lambda must be > 0");
        if (!(alpha > 1.0)) throw std::domain_error("radial integral: alpha must be > 1");
        if (!(beta > -1.0)) throw std::domain_error("radial integral: beta must be > -1");
        if (!(gamma > (beta + 1.0) / alpha))
            throw std::domain_error("radial integral: gamma must exceed (beta+1)/alpha");
    }
};

// lambda^{-gamma+(beta+1)/alpha} Gamma(gamma-(beta+1)/alpha) Gamma((beta+1)/alpha)
//   / (alpha Gamma(gamma)), evaluated in the log domain.
double radial_integral_closed(const RadialIntegralParams& params);

}  // namespace soblab::specfun
