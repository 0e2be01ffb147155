#include "cirest/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "cirest/error.hpp"

namespace cirest {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

} // namespace

GaussRule1D gauss_legendre(int n) {
    if (n < 1) {
        throw InvalidArgument("gauss_legendre: n must be positive");
    }
    GaussRule1D r;
    r.nodes.resize(static_cast<std::size_t>(n));
    r.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre(n, x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        const double dp = legendre(n, x).second;
        const auto idx = static_cast<std::size_t>(n - 1 - i);
        r.nodes[idx] = 0.5 * (x + 1.0);
        r.weights[idx] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

namespace {

// Conical product: x = u, y = (1 - u) w, Jacobian (1 - u).
QuadratureRule build_rule(int q) {
    const int nu = (q + 3) / 2; // exact for degree q + 1 in u
    const int nw = (q + 2) / 2;
    const GaussRule1D gu = gauss_legendre(nu);
    const GaussRule1D gw = gauss_legendre(nw);
    QuadratureRule rule;
    rule.degree = q;
    for (int i = 0; i < nu; ++i) {
        const double u = gu.nodes[static_cast<std::size_t>(i)];
        for (int j = 0; j < nw; ++j) {
            const double w = gw.nodes[static_cast<std::size_t>(j)];
            const double x = u;
            const double y = (1.0 - u) * w;
            rule.barycentric.push_back({1.0 - x - y, x, y});
            rule.weights.push_back(2.0 * gu.weights[static_cast<std::size_t>(i)] *
                                   gw.weights[static_cast<std::size_t>(j)] * (1.0 - u));
        }
    }
    return rule;
}

std::vector<QuadratureRule> build_all() {
    std::vector<QuadratureRule> rules;
    QuadratureRule centroid;
    centroid.degree = 1;
    centroid.barycentric.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    centroid.weights.push_back(1.0);
    rules.push_back(centroid);
    for (int q = 2; q <= kMaxQuadratureDegree; ++q) {
        rules.push_back(build_rule(q));
    }
    return rules;
}

} // namespace

const QuadratureRule& rule_for_degree(int q) {
    static const std::vector<QuadratureRule> rules = build_all();
    if (q < 1 || q > kMaxQuadratureDegree) {
        throw InvalidArgument("rule_for_degree: degree must lie in [1, 25]");
    }
    return rules[static_cast<std::size_t>(q - 1)];
}

double integrate(const BivariatePolynomial& f, const Triangle& tri, int q) {
    return integrate_field([&f](Point p) { return f(p); }, tri, q);
}

std::vector<std::array<double, 3>> barycentric_lattice(int level) {
    std::vector<std::array<double, 3>> pts;
    pts.reserve(static_cast<std::size_t>((level + 1) * (level + 2) / 2));
    const double inv = 1.0 / level;
    for (int i = 0; i <= level; ++i) {
        for (int j = 0; i + j <= level; ++j) {
            pts.push_back({(level - i - j) * inv, i * inv, j * inv});
        }
    }
    return pts;
}

bool SeminormSpec::is_approximate() const {
    if (is_infinite()) {
        return true;
    }
    return !(p == std::floor(p) && static_cast<long>(p) % 2 == 0);
}

int seminorm_quadrature_degree(int d, double p) {
    int q = 0;
    if (p == std::floor(p) && static_cast<long>(p) % 2 == 0) {
        q = static_cast<int>(p) * d;
    } else {
        q = 2 * static_cast<int>(std::ceil(p / 2.0)) * d + 4;
    }
    return std::clamp(q, 1, kMaxQuadratureDegree);
}

double multinomial(int a, int b) {
    double r = 1.0;
    for (int i = 1; i <= b; ++i) {
        r = r * (a + i) / i;
    }
    return r;
}

namespace {

// derivs[a] holds d^(a, m-a) as a polynomial in the coordinates of the points
// produced by `point(i)` for reference node i.
template <class PointFn>
double seminorm_core(const std::vector<BivariatePolynomial>& derivs, double p, double area,
                     PointFn&& point) {
    const int m = static_cast<int>(derivs.size()) - 1;
    int d = 0;
    for (const auto& g : derivs) {
        d = std::max(d, g.effective_degree());
    }
    bool all_zero = true;
    for (const auto& g : derivs) {
        if (g.max_abs_coefficient() != 0.0) {
            all_zero = false;
        }
    }
    if (all_zero) {
        return 0.0;
    }
    if (p == SeminormSpec::infinity()) {
        double best = 0.0;
        for (const auto& b : barycentric_lattice(kInfinityLatticeLevel)) {
            const Point x = point(Point{b[1], b[2]});
            for (const auto& g : derivs) {
                best = std::max(best, std::abs(g(x)));
            }
        }
        return best;
    }
    const QuadratureRule& rule = rule_for_degree(seminorm_quadrature_degree(d, p));
    const bool square = (p == 2.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const Point x = point(rule.reference_point(i));
        double local = 0.0;
        for (int a = 0; a <= m; ++a) {
            const double g = derivs[static_cast<std::size_t>(a)](x);
            local += multinomial(a, m - a) * (square ? g * g : std::pow(std::abs(g), p));
        }
        sum += rule.weights[i] * local;
    }
    sum *= area;
    return square ? std::sqrt(sum) : std::pow(sum, 1.0 / p);
}

void check_spec(const SeminormSpec& spec) {
    if (spec.m < 0) {
        throw InvalidArgument("seminorm: negative order");
    }
    if (!(spec.p >= 1.0)) {
        throw InvalidArgument("seminorm: exponent must satisfy p >= 1");
    }
}

} // namespace

double seminorm(const BivariatePolynomial& v, const SeminormSpec& spec, const Triangle& tri) {
    check_spec(spec);
    if (spec.m > v.degree()) {
        return 0.0;
    }
    std::vector<BivariatePolynomial> derivs;
    for (int a = 0; a <= spec.m; ++a) {
        derivs.push_back(v.derivative(a, spec.m - a));
    }
    const AffineMap map = tri.reference_map();
    return seminorm_core(derivs, spec.p, tri.area(), map);
}

std::vector<BivariatePolynomial> physical_derivatives(const BivariatePolynomial& u_hat, int m, const Mat2& a) {
    const Mat2 b = a.inverse();
    // d/dx_j = sum_i B_ij d/dxi_i
    std::vector<BivariatePolynomial> out;
    for (int i = 0; i <= m; ++i) {
        BivariatePolynomial g = u_hat;
        for (int r = 0; r < i; ++r) {
            g = g.directional(b.a11, b.a21);
        }
        for (int r = 0; r < m - i; ++r) {
            g = g.directional(b.a12, b.a22);
        }
        out.push_back(std::move(g));
    }
    return out;
}

double reference_seminorm(const BivariatePolynomial& u_hat, const SeminormSpec& spec, const Mat2& a) {
    check_spec(spec);
    if (spec.m > u_hat.degree()) {
        return 0.0;
    }
    const auto derivs = physical_derivatives(u_hat, spec.m, a);
    return seminorm_core(derivs, spec.p, 0.5 * std::abs(a.det()), [](Point p) { return p; });
}

} // namespace cirest
