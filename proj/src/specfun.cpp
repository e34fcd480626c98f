#include "soblab/specfun.hpp"

#include <cmath>

namespace soblab::specfun {

namespace {

// Lanczos coefficients, g = 7, N = 9 (Godfrey's table).
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // ln(2 pi)/2

double lanczos_log_gamma(double x) {
    // valid for x >= 0.5
    const double z = x - 1.0;
    double series = kLanczos[0];
    for (int i = 1; i < 9; ++i) series += kLanczos[i] / (z + i);
    const double t = z + kLanczosG + 0.5;
    return kHalfLog2Pi + (z + 0.5) * std::log(t) - t + std::log(series);
}

}  // namespace

double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma: argument must be > 0");
    if (x < 0.5) return lanczos_log_gamma(x + 1.0) - std::log(x);
    return lanczos_log_gamma(x);
}

double log_unit_ball_volume(double d) {
    if (!(d >= 1.0)) throw std::domain_error("log_unit_ball_volume: d must be >= 1");
    return 0.5 * d * std::log(M_PI) - log_gamma(0.5 * d + 1.0);
}

double unit_ball_volume(int d) {
    if (d < 1) throw std::domain_error("unit_ball_volume: d must be >= 1");
    return std::exp(log_unit_ball_volume(static_cast<double>(d)));
}

double radial_integral_closed(const RadialIntegralParams& p) {
    const double s = (p.beta + 1.0) / p.alpha;
    const double log_value = (-p.gamma + s) * std::log(p.lambda) + log_gamma(p.gamma - s) +
                             log_gamma(s) - std::log(p.alpha) - log_gamma(p.gamma);
    return std::exp(log_value);
}

}  // namespace soblab::specfun
