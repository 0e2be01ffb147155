#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "cirest/error.hpp"
#include "cirest/lagrange.hpp"
#include "cirest/quadrature.hpp"
#include "support.hpp"

using namespace cirest;
using testing_support::rel_diff;

namespace {

const Triangle kRef{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
const Triangle kEquilateral{{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}};

// Interpolant from the plain monomial Vandermonde system at the reference stencil.
Eigen::VectorXd monomial_vandermonde_interpolant(const std::function<double(double, double)>& f, int k) {
    std::vector<std::pair<double, double>> nodes;
    for (int i = 0; i <= k; ++i)
        for (int j = 0; i + j <= k; ++j) nodes.emplace_back(double(i) / k, double(j) / k);
    const auto n = static_cast<Eigen::Index>(nodes.size());
    Eigen::MatrixXd v(n, n);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        Eigen::Index c = 0;
        for (int deg = 0; deg <= k; ++deg)
            for (int j = 0; j <= deg; ++j)
                v(r, c++) = std::pow(nodes[r].first, deg - j) * std::pow(nodes[r].second, j);
        rhs(r) = f(nodes[r].first, nodes[r].second);
    }
    return v.fullPivLu().solve(rhs);
}

} // namespace

TEST_CASE("stencil layout") {
    const auto s1 = stencil(1, kEquilateral);
    REQUIRE(s1.size() == 3);
    for (const auto& p : s1.points) {
        bool is_vertex = false;
        for (const auto& v : kEquilateral.vertices()) is_vertex = is_vertex || distance(p.x, v) < 1e-15;
        CHECK(is_vertex);
    }
    const auto s3 = reference_stencil(3);
    CHECK(s3.size() == 10);
    for (const auto& p : s3.points) {
        CHECK(p.gamma[0] + p.gamma[1] + p.gamma[2] == 3);
        CHECK(p.x.x == doctest::Approx(p.gamma[1] / 3.0));
        CHECK(p.x.y == doctest::Approx(p.gamma[2] / 3.0));
    }
    const auto s2 = stencil(2, kRef);
    CHECK(s2.size() == 6);
    int midpoints = 0;
    for (const auto& p : s2.points) midpoints += (p.gamma[0] == 1 || p.gamma[1] == 1 || p.gamma[2] == 1) ? 1 : 0;
    CHECK(midpoints == 3);
    for (int k = 1; k <= kMaxInterpolationOrder; ++k) CHECK(reference_stencil(k).size() == std::size_t((k + 1) * (k + 2) / 2));
}

TEST_CASE("cardinal basis is a Kronecker delta on the stencil") {
    for (int k = 1; k <= kMaxInterpolationOrder; ++k) {
        const auto& basis = cardinal_basis(k);
        const auto st = reference_stencil(k);
        for (std::size_t i = 0; i < basis.size(); ++i)
            for (std::size_t j = 0; j < st.size(); ++j)
                CHECK(std::abs(basis[i](st.points[j].x) - (i == j ? 1.0 : 0.0)) < (k <= 7 ? 1e-10 : 1e-8));
    }
}

TEST_CASE("cardinal basis agrees with a Bernstein-Vandermonde solve") {
    for (int k = 1; k <= 6; ++k) {
        const auto st = reference_stencil(k);
        const auto n = static_cast<Eigen::Index>(st.size());
        auto fact = [](int q) { double r = 1.0; for (int i = 2; i <= q; ++i) r *= i; return r; };
        auto bern = [&](const std::array<int, 3>& g, Point p) {
            const double l[3] = {1.0 - p.x - p.y, p.x, p.y};
            return fact(k) / (fact(g[0]) * fact(g[1]) * fact(g[2])) * std::pow(l[0], g[0]) * std::pow(l[1], g[1]) * std::pow(l[2], g[2]);
        };
        Eigen::MatrixXd m(n, n);
        for (Eigen::Index r = 0; r < n; ++r)
            for (Eigen::Index c = 0; c < n; ++c) m(r, c) = bern(st.points[c].gamma, st.points[r].x);
        const Eigen::MatrixXd coef = m.fullPivLu().inverse();
        const auto& basis = cardinal_basis(k);
        const Point probes[3] = {{0.1, 0.2}, {0.6, 0.3}, {0.05, 0.9}};
        for (Eigen::Index a = 0; a < n; ++a)
            for (const Point& p : probes) {
                double ref = 0.0;
                for (Eigen::Index g = 0; g < n; ++g) ref += coef(g, a) * bern(st.points[g].gamma, p);
                CHECK(std::abs(basis[a](p) - ref) < 1e-10);
            }
    }
}

TEST_CASE("interpolation examples") {
    const auto r = interpolate(BivariatePolynomial::monomial(2, 0), 1, kRef);
    CHECK(std::abs(r.interpolant.coeff(1, 0) - 1.0) < 1e-14);
    CHECK(std::abs(r.interpolant.coeff(0, 0)) < 1e-14);
    CHECK(std::abs(r.interpolant.coeff(0, 1)) < 1e-14);

    const auto r3 = interpolate(BivariatePolynomial::monomial(3, 0), 2, kRef);
    const Eigen::VectorXd oracle = monomial_vandermonde_interpolant([](double x, double) { return x * x * x; }, 2);
    Eigen::Index c = 0;
    for (int deg = 0; deg <= 2; ++deg)
        for (int j = 0; j <= deg; ++j) CHECK(std::abs(r3.reference_interpolant.coeff(deg - j, j) - oracle(c++)) < 1e-12);
    for (const auto& p : reference_stencil(2).points) CHECK(std::abs(r3.interpolant(p.x) - std::pow(p.x.x, 3)) < 1e-14);
}

TEST_CASE("unisolvence on random triangles") {
    Rng rng(123);
    for (int trial = 0; trial < 300; ++trial) {
        const Triangle t = random_triangle(rng);
        const int k = 1 + trial % 4;
        const auto w = random_polynomial(rng, k);
        const auto r = interpolate(w, k, t);
        // Compared through the pullback; physical coefficients of a needle are ill-conditioned.
        const auto w_hat = w.compose(t.reference_map());
        CHECK(coefficient_distance(r.reference_interpolant, w_hat) <= 1e-9 * std::max(1.0, w_hat.max_abs_coefficient()));
    }
    for (int k = 1; k <= kMaxInterpolationOrder; ++k) {
        const auto w_hat = random_polynomial(rng, k);
        std::vector<double> values;
        for (const auto& p : reference_stencil(k).points) values.push_back(w_hat(p.x));
        // Monomial coefficients lose digits with k on the uniform lattice.
        const double tol = k <= 6 ? 1e-9 : 1e-6;
        CHECK(coefficient_distance(interpolate_reference(values, k), w_hat) <= tol * std::max(1.0, w_hat.max_abs_coefficient()));
    }
}

TEST_CASE("unisolvence in physical coordinates on well-shaped triangles") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    for (int trial = 0; trial < 200; ++trial) {
        const Triangle t({u(rng), u(rng)}, {2.0 + u(rng), u(rng)}, {u(rng), 2.0 + u(rng)});
        const int k = 1 + trial % 4;
        const auto w = testing_support::random_polynomial(rng, k);
        CHECK(coefficient_distance(interpolate(w, k, t).interpolant, w) <= 1e-9);
    }
}

TEST_CASE("residual vanishes on the stencil") {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const Triangle t = random_triangle(rng);
        const int k = 1 + trial % 4;
        const auto v_hat = random_polynomial(rng, k + 2);
        const auto e = reference_residual(v_hat, k);
        double scale = 0.0;
        for (const auto& p : reference_stencil(k).points) scale = std::max(scale, std::abs(v_hat(p.x)));
        for (const auto& p : reference_stencil(k).points) CHECK(std::abs(e(p.x)) <= 1e-10 * std::max(scale, 1.0));
        (void)t;
    }
}

TEST_CASE("interpolation error examples") {
    const auto v = BivariatePolynomial::monomial(2, 0) + BivariatePolynomial::monomial(0, 2);
    // Symbolic value of int (x^2 + y^2 - x - y)^2 over the reference triangle.
    CHECK(interp_error(v, 1, 0, 2.0, kRef) == doctest::Approx(std::sqrt(11.0 / 180.0)).epsilon(1e-13));

    const Triangle ri({0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0});
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        const auto q = testing_support::random_polynomial(rng, 2);
        CHECK(interp_error(q, 1, 1, 2.0, ri) <= 0.491596 * seminorm(q, {2, 2.0}, ri) * (1.0 + 1e-6));
    }
    for (int k = 1; k <= 4; ++k) {
        CHECK(interp_error(testing_support::random_polynomial(rng, k), k, 0, 2.0, kEquilateral) < 1e-13);
    }
}

TEST_CASE("bound ratio") {
    const auto v = BivariatePolynomial::monomial(2, 0) + BivariatePolynomial::monomial(0, 2);
    CHECK_THROWS_AS(bound_ratio(BivariatePolynomial::affine(1.0, 2.0, 3.0), 1, 1, 2.0, kRef), ZeroSeminorm);
    double lo = 1e300, hi = 0.0;
    for (double h : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const auto b = bound_ratio(v, 1, 1, 2.0, example1_right(h));
        CHECK(std::isfinite(b.ratio));
        lo = std::min(lo, b.ratio);
        hi = std::max(hi, b.ratio);
    }
    CHECK(hi / lo < 3.0);
    const auto eq = bound_ratio(BivariatePolynomial::monomial(3, 0), 2, 1, 2.0, kEquilateral);
    CHECK(eq.ratio > 0.0);
    // Exact value sqrt(30)/120 from a symbolic evaluation of the same quotient.
    CHECK(eq.ratio == doctest::Approx(std::sqrt(30.0) / 120.0).epsilon(1e-12));
}

TEST_CASE("kobayashi bound on random triangles and cubics") {
    Rng rng(77);
    for (int trial = 0; trial < 2000; ++trial) {
        const Triangle t = random_triangle(rng);
        const auto v = random_polynomial(rng, 3);
        const double err = interp_error(v, 1, 1, 2.0, t);
        const double semi = seminorm(v, {2, 2.0}, t);
        CHECK(err <= kobayashi_constant(t) * semi * (1.0 + 1e-8));
        CHECK(err <= triangle_metrics(t).circumradius * semi * (1.0 + 1e-8));
    }
}

TEST_CASE("p=2 supremum dominates random probes") {
    Rng rng(9);
    for (int k = 1; k <= 3; ++k) {
        for (int m = 1; m <= k; ++m) {
            const Triangle t = random_triangle(rng);
            const auto sup = sup_bound_ratio(k, m, 2.0, t, 1, 16, 0);
            CHECK(sup.exact);
            const auto wide = sup_bound_ratio(k, m, 2.0, t, 1);
            CHECK_FALSE(wide.exact);
            CHECK(wide.ratio >= sup.ratio * (1.0 - 1e-8));
            const auto at_max = bound_ratio_reference(sup.maximizer, k, m, 2.0, t);
            CHECK(rel_diff(at_max.ratio, sup.ratio) < 1e-8);
            for (int s = 0; s < 50; ++s) {
                const auto b = bound_ratio_reference(random_polynomial(rng, k + 1), k, m, 2.0, t);
                CHECK(b.ratio <= sup.ratio * (1.0 + 1e-9));
            }
            for (double p : {1.0, SeminormSpec::infinity()}) {
                const auto sp = sup_bound_ratio(k, m, p, t, 2);
                const auto check = bound_ratio_reference(sp.maximizer, k, m, p, t);
                CHECK(rel_diff(check.ratio, sp.ratio) < 1e-6);
            }
        }
    }
}
