#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "cirest/constants.hpp"
#include "cirest/error.hpp"
#include "cirest/lagrange.hpp"
#include "cirest/quadrature.hpp"
#include "support.hpp"

using namespace cirest;
using testing_support::rel_diff;

namespace {

const Triangle kRef = squeezed_triangle(1.0, 1.0);

// Flat limit of B^{m,1} on K_{1,beta}: sup |v^(m)|_w / |v''|_w over v(0) = v(1) = 0 with weight 1 - x
// on [0, 1]. Basis x^(j+1) (1 - x), Gram matrices integrated exactly.
double flat_limit(int m, int n) {
    auto coeffs = [](int j) {
        std::vector<double> c(static_cast<std::size_t>(j + 3), 0.0);
        c[static_cast<std::size_t>(j + 1)] = 1.0;
        c[static_cast<std::size_t>(j + 2)] = -1.0;
        return c;
    };
    auto deriv = [](std::vector<double> c, int times) {
        for (int t = 0; t < times; ++t) {
            std::vector<double> d(c.size() > 1 ? c.size() - 1 : 1, 0.0);
            for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = static_cast<double>(i) * c[i];
            c = d;
        }
        return c;
    };
    auto inner = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) {
                const double e = static_cast<double>(i + j);
                s += a[i] * b[j] * (1.0 / (e + 1.0) - 1.0 / (e + 2.0));
            }
        return s;
    };
    Eigen::MatrixXd top(n, n), bottom(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            top(i, j) = inner(deriv(coeffs(i), m), deriv(coeffs(j), m));
            bottom(i, j) = inner(deriv(coeffs(i), 2), deriv(coeffs(j), 2));
        }
    const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(top, bottom);
    return std::sqrt(es.eigenvalues()(n - 1));
}

} // namespace

TEST_CASE("Babuska-Aziz constant A2") {
    const double a2 = babuska_aziz_A2();
    CHECK(std::abs(a2 - 0.49291) <= 1e-5);
    CHECK(std::abs(1.0 / a2 + std::tan(1.0 / a2)) <= 1e-9);
    // Independent Newton iteration on t + tan t.
    double t = 2.0;
    for (int i = 0; i < 50; ++i) {
        const double c = std::cos(t);
        t -= (t + std::tan(t)) / (1.0 + 1.0 / (c * c));
    }
    CHECK(std::abs(babuska_aziz_root() - t) <= 1e-12);
    CHECK(std::abs(t - 2.02876) < 1e-5);
}

TEST_CASE("estimate_B examples") {
    const double a2 = babuska_aziz_A2();
    const auto ref = estimate_B(1, 1, 2.0, kRef, 8);
    CHECK(ref.kind == EstimateKind::rayleigh_lower_bound);
    CHECK(ref.value <= a2 * (1.0 + 1e-6));
    CHECK(ref.value >= 0.9 * a2);
    const auto flat = estimate_B(1, 1, 2.0, squeezed_triangle(1.0, 0.01), 8);
    CHECK(flat.value <= a2 * (1.0 + 1e-6));
    CHECK(kind_name(EstimateKind::exact_root) == "exact-root");
    CHECK(kind_name(ref.kind) == "rayleigh-lower-bound");
}

TEST_CASE("estimate_B flat limit") {
    for (int m : {0, 1}) {
        const double oracle = flat_limit(m, 8);
        const double est = estimate_B(1, m, 2.0, squeezed_triangle(1.0, 1e-3), 8).value;
        CHECK(rel_diff(est, oracle) < 1e-5);
    }
}

TEST_CASE("estimate_B argument checks") {
    CHECK_THROWS_AS(estimate_B(1, 1, 2.0, kRef, 1), InvalidArgument);
    CHECK_THROWS_AS(estimate_B(2, 3, 2.0, kRef, 6), InvalidArgument);
    CHECK_THROWS_AS(estimate_B(1, 1, 0.5, kRef, 6), InvalidArgument);
    CHECK_THROWS_AS(estimate_B(1, 1, 2.0, kRef, kMaxBasisDegree + 1), InvalidArgument);
}

TEST_CASE("estimate_B is monotone in the basis degree") {
    // Squeezed triangles hold 1e-12 up to N = 12. On the sheared needle monomial-form roundoff is
    // ~1e-10 relative up to N = 10 and ~1e-8 beyond.
    struct Case {
        Triangle t;
        double rel;
        int max_degree;
    };
    const std::vector<Case> cases{{kRef, 0.0, kMaxBasisDegree},
                                  {squeezed_triangle(1.0, 0.1), 0.0, kMaxBasisDegree},
                                  {squeezed_triangle(0.5, 0.05), 0.0, kMaxBasisDegree},
                                  {Triangle({0.0, 0.0}, {1.0, 0.0}, {0.3, 0.02}), 1e-9, 10}};
    for (const auto& [t, rel, max_degree] : cases)
        for (auto [k, m] : {std::pair{1, 1}, std::pair{1, 0}, std::pair{2, 1}, std::pair{2, 2}}) {
            double prev = 0.0;
            for (int n = k + 1; n <= max_degree; ++n) {
                const double v = estimate_B(k, m, 2.0, t, n).value;
                CHECK(v >= prev - 1e-12 - rel * prev);
                prev = v;
            }
        }
}

TEST_CASE("p=2 maximizer vanishes on the lattice and attains the quotient") {
    const std::vector<Triangle> tris{kRef, squeezed_triangle(1.0, 0.01),
                                     Triangle({0.2, -0.1}, {1.3, 0.4}, {0.1, 0.9})};
    for (const auto& t : tris)
        for (auto [k, m] : {std::pair{1, 1}, std::pair{1, 0}, std::pair{2, 1}, std::pair{3, 2}}) {
            const auto est = estimate_B(k, m, 2.0, t, 8);
            for (const auto& pt : reference_stencil(k).points) CHECK(std::abs(est.maximizer(pt.x)) <= 1e-9);
            const Mat2 a = t.reference_map().linear;
            const double direct = reference_seminorm(est.maximizer, {m, 2.0}, a) /
                                  reference_seminorm(est.maximizer, {k + 1, 2.0}, a);
            CHECK(rel_diff(direct, est.value) < 1e-9);
        }
}

TEST_CASE("p=2 estimate is rotation invariant") {
    const Triangle base({0.0, 0.0}, {1.0, 0.0}, {0.3, 0.05});
    for (double phi : {0.4, 1.9, 3.0}) {
        const Mat2 r = Mat2::rotation(phi);
        const Triangle rot(r * base.vertex(0), r * base.vertex(1), r * base.vertex(2));
        for (auto [k, m] : {std::pair{1, 1}, std::pair{2, 1}})
            CHECK(rel_diff(estimate_B(k, m, 2.0, rot, 8).value, estimate_B(k, m, 2.0, base, 8).value) < 1e-8);
    }
}

TEST_CASE("p != 2 estimates") {
    for (double p : {1.0, 4.0, SeminormSpec::infinity()}) {
        const auto est = estimate_B(1, 1, p, kRef, 5);
        CHECK(est.kind == EstimateKind::sampled_lower_bound);
        CHECK(est.value > 0.0);
        CHECK(std::isfinite(est.value));
        for (const auto& pt : reference_stencil(1).points) CHECK(std::abs(est.maximizer(pt.x)) <= 1e-9);
        const Mat2 a = kRef.reference_map().linear;
        const double direct =
            reference_seminorm(est.maximizer, {1, p}, a) / reference_seminorm(est.maximizer, {2, p}, a);
        CHECK(rel_diff(direct, est.value) < 1e-12);
    }
}

TEST_CASE("squeeze scaling table") {
    const std::vector<std::pair<double, double>> ab{{1.0, 1.0}, {1.0, 0.1}, {0.5, 0.05}};
    const auto t11 = squeeze_scaling_check(1, 1, 2.0, ab, 6);
    REQUIRE(t11.rows.size() == 3);
    CHECK(t11.rows[0].relative == 1.0);
    CHECK(t11.rows[0].normalized == t11.reference);
    CHECK(t11.below_upper_bounds(1e-6));
    CHECK(t11.below_reference(1e-6));
    for (const auto& r : t11.rows) {
        REQUIRE(r.upper_bound.has_value());
        CHECK(*r.upper_bound == doctest::Approx(std::max(r.alpha, r.beta) * babuska_aziz_A2()));
    }
    // (0.5, 0.05) is (1, 0.1) scaled by 1/2, so the normalized values coincide.
    CHECK(rel_diff(t11.rows[1].normalized, t11.rows[2].normalized) < 1e-9);
    const auto t10 = squeeze_scaling_check(1, 0, 2.0, ab, 6);
    CHECK(t10.below_upper_bounds(1e-6));
    CHECK(rel_diff(t10.rows[2].estimate.value, 0.25 * t10.rows[1].estimate.value) < 1e-9);
    CHECK_THROWS_AS(squeeze_scaling_check(1, 1, 2.0, {{1.5, 0.1}}, 6), InvalidArgument);
}

TEST_CASE("corollary error bounds hold") {
    for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{1.0, 0.01}, std::pair{0.5, 0.05}}) {
        const auto r11 = corollary_error_check(1, 1, 2.0, a, b, 1000);
        CHECK(r11.constant_source == "A2");
        CHECK(r11.violations == 0);
        CHECK(r11.worst > 0.0);
        const auto r10 = corollary_error_check(1, 0, 2.0, a, b, 300);
        CHECK(r10.violations == 0);
    }
}
