#ifndef CIREST_LAGRANGE_HPP
#define CIREST_LAGRANGE_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cirest/geometry.hpp"
#include "cirest/parallel.hpp"
#include "cirest/polynomial.hpp"

namespace cirest {

constexpr int kMaxInterpolationOrder = 10;

struct StencilPoint {
    std::array<int, 3> gamma; // barycentric multi-index, |gamma| = k
    Point x;
};

/// Lattice points with barycentric coordinates gamma / k.
struct Stencil {
    int k = 0;
    std::vector<StencilPoint> points;

    std::size_t size() const { return points.size(); }
};

/// Ordered by gamma[1] then gamma[2], both increasing.
Stencil stencil(int k, const Triangle& tri);
Stencil reference_stencil(int k);

/// Cardinal functions on the reference triangle in reference_stencil(k) order:
/// L_i(x_j) = delta_ij. Built once per k from the closed-form lattice product.
const std::vector<BivariatePolynomial>& cardinal_basis(int k);

struct InterpolationResult {
    BivariatePolynomial interpolant;           // in the coordinates of the triangle
    BivariatePolynomial reference_interpolant; // pulled back to the reference triangle
    std::optional<BivariatePolynomial> residual; // v - I v, polynomial input only
};

InterpolationResult interpolate(const BivariatePolynomial& v, int k, const Triangle& tri);
InterpolationResult interpolate(const std::function<double(Point)>& v, int k, const Triangle& tri);

/// Interpolant of the values at reference_stencil(k), on the reference triangle.
BivariatePolynomial interpolate_reference(const std::vector<double>& values, int k);

/// u_hat - I u_hat on the reference triangle.
BivariatePolynomial reference_residual(const BivariatePolynomial& u_hat, int k);

/// |v - I_K^k v|_{m,p,K}.
double interp_error(const BivariatePolynomial& v, int k, int m, double p, const Triangle& tri);

struct BoundRatio {
    double error = 0.0;         // |v - I v|_{m,p}
    double seminorm = 0.0;      // |v|_{k+1,p}
    double circumradius_bound = 0.0; // (R/h)^m h^(k+1-m) |v|_{k+1,p}
    double classical_bound = 0.0;    // h^(k+1) / rho^m |v|_{k+1,p}
    double ratio = 0.0;
    double classical_ratio = 0.0;
};

/// Throws ZeroSeminorm when |v|_{k+1,p,K} = 0.
BoundRatio bound_ratio(const BivariatePolynomial& v, int k, int m, double p, const Triangle& tri);
/// Same with v given by its pullback to the reference triangle.
BoundRatio bound_ratio_reference(const BivariatePolynomial& u_hat, int k, int m, double p, const Triangle& tri);

/// (R/h)^m h^(k+1-m)
double circumradius_factor(const Triangle& tri, int k, int m);
/// h^(k+1) / rho^m
double classical_factor(const Triangle& tri, int k, int m);

/// Random triangle: (0,0), (1,0), rho (cos theta, sin theta) with rho log-uniform in [1e-4, 1] and
/// theta uniform in [pi/3, pi - 1e-3], then a random rotation, reflection, scale and shift.
Triangle random_triangle(Rng& rng);

/// Random polynomial of the given degree with coefficients uniform in [-1, 1].
BivariatePolynomial random_polynomial(Rng& rng, int degree);

enum class Family { random, example1_left, example1_right };

Family parse_family(const std::string& name);
std::string family_name(Family f);

/// Isosceles with base h and height h^alpha: (0,0), (h,0), (h/2, h^alpha).
Triangle example1_left(double h, double alpha = 1.5);
/// (0,0), (h,0), (h^alpha, h^beta) with 1 < alpha < beta < 1 + alpha.
Triangle example1_right(double h, double alpha = 1.2, double beta = 1.9);

struct SupRatio {
    double ratio = 0.0;          // sup over the probe set of error / circumradius_bound
    double classical_ratio = 0.0; // error / classical_bound at the same maximizer
    BivariatePolynomial maximizer; // pullback to the reference triangle
    bool exact = false;            // p = 2 with extra_degree = 0: the supremum over all of P_{k+1}
};

/// Empirical supremum of bound_ratio over v of degree k+1 .. k+1+extra_degree. I reproduces P_k, so
/// lower-degree parts do not matter. For p = 2 the supremum over that space is the largest
/// eigenvalue of a generalized eigenproblem (exact over P_{k+1} when extra_degree = 0). For other p
/// it is the best local ascent started from the p = 2 maximizer, the monomials and `random_starts`
/// seeded combinations.
SupRatio sup_bound_ratio(int k, int m, double p, const Triangle& tri, std::uint64_t seed, int random_starts = 16,
                         int extra_degree = 4);

struct SweepRow {
    double h = 0.0; // family parameter; the diameter for the random family
    TriangleMetrics metrics;
    BoundRatio at_sup; // bound_ratio of the supremum's maximizer
};

/// sup_bound_ratio along a family, h log-spaced from h_max down to h_min. Random-family triangles
/// come from derive_seed(seed, i), rescaled to diameter h; the supremum search uses `seed`.
std::vector<SweepRow> interp_sweep(int k, int m, double p, Family family, double h_min, double h_max, int samples,
                                   std::uint64_t seed, int random_starts = 16, int extra_degree = 4);

} // namespace cirest

#endif // CIREST_LAGRANGE_HPP
