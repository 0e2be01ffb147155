#ifndef CIREST_TESTS_SUPPORT_HPP
#define CIREST_TESTS_SUPPORT_HPP

#include <cmath>
#include <numbers>
#include <random>

#include "cirest/geometry.hpp"
#include "cirest/polynomial.hpp"

namespace testing_support {

inline double rel_diff(double a, double b) {
    const double s = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / s;
}

/// Random non-degenerate triangle with a skinny bias, drawn independently of the library generator.
inline cirest::Triangle random_triangle(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double rho = std::pow(10.0, -4.0 * u(rng));
    const double theta = std::numbers::pi / 3.0 + u(rng) * (2.0 * std::numbers::pi / 3.0 - 1e-3);
    const double phi = 2.0 * std::numbers::pi * u(rng);
    const double scale = std::pow(10.0, 2.0 * u(rng) - 1.0);
    const cirest::Point shift{u(rng) * 4.0 - 2.0, u(rng) * 4.0 - 2.0};
    const cirest::Mat2 r = cirest::Mat2::rotation(phi);
    auto place = [&](cirest::Point p) { return shift + scale * (r * p); };
    return {place({0.0, 0.0}), place({1.0, 0.0}),
            place({rho * std::cos(theta), rho * std::sin(theta)})};
}

inline cirest::BivariatePolynomial random_polynomial(std::mt19937_64& rng, int degree) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    cirest::BivariatePolynomial p(degree);
    for (int i = 0; i <= degree; ++i) {
        for (int j = 0; i + j <= degree; ++j) {
            p.set_coeff(i, j, u(rng));
        }
    }
    return p;
}

/// Exact integral of x^i y^j over the reference triangle: i! j! / (i + j + 2)!.
inline double reference_monomial_integral(int i, int j) {
    double r = 1.0;
    for (int n = 1; n <= i; ++n) r *= n;
    for (int n = 1; n <= j; ++n) r *= n;
    for (int n = 1; n <= i + j + 2; ++n) r /= n;
    return r;
}

} // namespace testing_support

#endif
