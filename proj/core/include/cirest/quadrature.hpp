#ifndef CIREST_QUADRATURE_HPP
#define CIREST_QUADRATURE_HPP

#include <array>
#include <limits>
#include <vector>

#include "cirest/geometry.hpp"
#include "cirest/polynomial.hpp"

namespace cirest {

/// Gauss-Legendre nodes and weights on [0, 1].
struct GaussRule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussRule1D gauss_legendre(int n);

/// Rule on the reference triangle; weights sum to 1 and are scaled by the area at use.
struct QuadratureRule {
    int degree = 0;
    std::vector<std::array<double, 3>> barycentric;
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
    /// Reference coordinates (xi, eta) = (l1, l2) of node i.
    Point reference_point(std::size_t i) const { return {barycentric[i][1], barycentric[i][2]}; }
};

constexpr int kMaxQuadratureDegree = 25;

/// Positive-weight rule exact for total degree <= q, 1 <= q <= 25.
const QuadratureRule& rule_for_degree(int q);

double integrate(const BivariatePolynomial& f, const Triangle& tri, int q);

/// Integral of an arbitrary field f(Point) over tri with the degree-q rule.
template <class F>
double integrate_field(F&& f, const Triangle& tri, int q) {
    const QuadratureRule& rule = rule_for_degree(q);
    const AffineMap map = tri.reference_map();
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        sum += rule.weights[i] * f(map(rule.reference_point(i)));
    }
    return sum * tri.area();
}

/// Barycentric lattice {(i, j, level - i - j) / level}.
std::vector<std::array<double, 3>> barycentric_lattice(int level);

constexpr int kInfinityLatticeLevel = 40;

/// |v|_{m,p,K} with multinomial weights m!/delta! on the mixed derivatives.
struct SeminormSpec {
    int m = 0;
    double p = 2.0;

    static constexpr double infinity() { return std::numeric_limits<double>::infinity(); }
    bool is_infinite() const { return p == infinity(); }
    /// True when |.|^p of a polynomial is not itself a polynomial.
    bool is_approximate() const;
};

/// Quadrature degree used for |w|^p with deg w = d.
int seminorm_quadrature_degree(int d, double p);

/// m!/(a! b!)
double multinomial(int a, int b);

/// Seminorm of v given in the coordinates of tri.
double seminorm(const BivariatePolynomial& v, const SeminormSpec& spec, const Triangle& tri);

/// Seminorm on K = A(K_hat) + b of the field whose pullback to the reference triangle is u_hat.
/// Physical derivatives are formed as directional derivatives of u_hat along the columns of A^{-1}.
double reference_seminorm(const BivariatePolynomial& u_hat, const SeminormSpec& spec, const Mat2& a);

/// All physical derivatives d^(a, m-a) of the pullback u_hat, indexed by a = 0..m.
std::vector<BivariatePolynomial> physical_derivatives(const BivariatePolynomial& u_hat, int m, const Mat2& a);

} // namespace cirest

#endif // CIREST_QUADRATURE_HPP
