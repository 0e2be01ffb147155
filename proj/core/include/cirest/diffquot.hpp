#ifndef CIREST_DIFFQUOT_HPP
#define CIREST_DIFFQUOT_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cirest/geometry.hpp"
#include "cirest/parallel.hpp"
#include "cirest/polynomial.hpp"

namespace cirest {

/// Newton divided differences; entry(i, j) = f[x_i, ..., x_j].
struct DividedDifferenceTable {
    std::vector<double> nodes;
    std::vector<std::vector<double>> columns; // columns[d][i] = f[x_i, ..., x_{i+d}]

    double entry(std::size_t i, std::size_t j) const { return columns[j - i][i]; }
    double top() const { return columns.back().front(); }
};

/// Throws InvalidArgument on an empty node list or repeated nodes.
DividedDifferenceTable divided_difference(const std::function<double(double)>& f, const std::vector<double>& nodes);

/// Integral over the ordered simplex 1 >= w_1 >= ... >= w_dim >= 0 by nested Gauss-Legendre with
/// n points per level; exact for polynomials of degree <= 2n - dim.
double ordered_simplex_integral(const std::function<double(const std::vector<double>&)>& g, int dim, int n);

/// |f[x_0..x_n] - integral of f^(n)(x_0 + sum t_i (x_i - x_{i-1})) over the ordered simplex|
/// for f a polynomial in x alone.
double integral_representation_check(const BivariatePolynomial& f, const std::vector<double>& nodes);

using MultiIndex = std::array<int, 2>;

/// Corners x_{gamma + eta}, eta <= delta, all on the order-k lattice of the reference triangle.
bool box_feasible(int k, const MultiIndex& gamma, const MultiIndex& delta);

struct GridQuotient {
    int k = 0;
    MultiIndex gamma{};
    MultiIndex delta{};
    double value = 0.0;
};

/// k^|delta| sum_{eta <= delta} (-1)^(|delta|-|eta|) / (eta! (delta-eta)!) f(x_{gamma+eta}),
/// x_(l,q) = (l/k, q/k). delta = (0,0) gives f(x_gamma).
GridQuotient grid_quotient(const std::function<double(Point)>& f, int k, const MultiIndex& gamma,
                           const MultiIndex& delta);

struct BoxDomain {
    MultiIndex gamma{};
    MultiIndex delta{};
    Point lower;
    Point upper;

    bool is_segment() const { return delta[0] == 0 || delta[1] == 0; }
};

BoxDomain box_domain(int k, const MultiIndex& gamma, const MultiIndex& delta);

/// Integral of v over the box with base gamma and step delta (|delta| >= 1), in closed form as the
/// grid quotient of the delta-fold antiderivative of v.
double box_integral(const BivariatePolynomial& v, int k, const MultiIndex& gamma, const MultiIndex& delta);

/// Same integral by nested Gauss-Legendre over the two ordered simplices.
double box_integral_quadrature(const std::function<double(Point)>& v, int k, const MultiIndex& gamma,
                               const MultiIndex& delta, int points_per_level);

/// Bases gamma of all feasible boxes with step delta, in (l outer, q inner) order.
std::vector<MultiIndex> box_bases(int k, const MultiIndex& delta);

/// With u = v - I^k v on the reference triangle: the largest |grid quotient of u| and
/// |box integral of d^delta u| over all feasible (gamma, delta), |delta| >= 1.
double residual_vanishing(const BivariatePolynomial& v, int k);

struct UnisolvenceSystem {
    int k = 0;
    MultiIndex delta{};
    std::vector<MultiIndex> bases;
    Eigen::MatrixXd matrix; // rows: boxes, columns: monomials of P_{k-|delta|} in BivariatePolynomial order
    double max_singular = 0.0;
    double min_singular = 0.0;
    bool nonsingular = false; // square and min_singular > 1e-10 max_singular
};

UnisolvenceSystem unisolvence_matrix(int k, const MultiIndex& delta);

struct IdentityCheck {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Difference-quotient identity suite: leading coefficients, integral representation, recursion,
/// grid quotient / box integral duality, residual vanishing (degrees <= 6, k <= 4), the exact box
/// values on k = 2 and k = 3, and unisolvence for k <= 5.
std::vector<IdentityCheck> identity_suite(std::uint64_t seed = kDefaultSeed);

} // namespace cirest

#endif // CIREST_DIFFQUOT_HPP
