#pragma once

#include <cmath>
#include <functional>
#include <utility>

namespace soblab::optim {

// Golden-section minimization on [a,b]; returns (argmin, min).
inline std::pair<double, double> golden_section_minimize(const std::function<double(double)>& f,
                                                         double a, double b, double tol = 1e-10) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

inline std::pair<double, double> golden_section_maximize(const std::function<double(double)>& f,
                                                         double a, double b, double tol = 1e-10) {
    auto [x, v] = golden_section_minimize([&f](double t) { return -f(t); }, a, b, tol);
    return {x, -v};
}

}  // namespace soblab::optim
