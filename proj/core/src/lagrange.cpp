#include "cirest/lagrange.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <mutex>
#include <numbers>

#include "cirest/error.hpp"
#include "cirest/quadrature.hpp"
#include "cirest/rayleigh.hpp"

namespace cirest {

namespace {

void check_order(int k) {
    if (k < 1 || k > kMaxInterpolationOrder) {
        throw InvalidArgument("interpolation order must lie in [1, 10]");
    }
}

// L_gamma = prod_i prod_{j < gamma_i} (k lambda_i - j) / (gamma_i - j), which is one at x_gamma and
// vanishes on every other lattice point.
std::vector<BivariatePolynomial> build_cardinal(int k) {
    const Stencil st = reference_stencil(k);
    const std::array<BivariatePolynomial, 3> lambda{BivariatePolynomial::affine(1.0, -1.0, -1.0),
                                                    BivariatePolynomial::affine(0.0, 1.0, 0.0),
                                                    BivariatePolynomial::affine(0.0, 0.0, 1.0)};
    std::vector<BivariatePolynomial> cardinal;
    for (const auto& sp : st.points) {
        BivariatePolynomial l = BivariatePolynomial::constant(1.0);
        for (std::size_t i = 0; i < 3; ++i) {
            for (int j = 0; j < sp.gamma[i]; ++j) {
                BivariatePolynomial factor = static_cast<double>(k) * lambda[i];
                factor.add_to_coeff(0, 0, -static_cast<double>(j));
                factor *= 1.0 / static_cast<double>(sp.gamma[i] - j);
                l = l * factor;
            }
        }
        cardinal.push_back(l.with_degree(k));
    }
    return cardinal;
}

} // namespace

Stencil reference_stencil(int k) {
    if (k < 1) {
        throw InvalidArgument("stencil: k must be positive");
    }
    Stencil st;
    st.k = k;
    for (int i = 0; i <= k; ++i) {
        for (int j = 0; i + j <= k; ++j) {
            st.points.push_back({{k - i - j, i, j}, {static_cast<double>(i) / k, static_cast<double>(j) / k}});
        }
    }
    return st;
}

Stencil stencil(int k, const Triangle& tri) {
    Stencil st = reference_stencil(k);
    for (auto& sp : st.points) {
        sp.x = tri.from_barycentric(static_cast<double>(sp.gamma[0]) / k, static_cast<double>(sp.gamma[1]) / k,
                                    static_cast<double>(sp.gamma[2]) / k);
    }
    return st;
}

const std::vector<BivariatePolynomial>& cardinal_basis(int k) {
    check_order(k);
    static std::array<std::once_flag, kMaxInterpolationOrder + 1> flags;
    static std::array<std::vector<BivariatePolynomial>, kMaxInterpolationOrder + 1> cache;
    const auto idx = static_cast<std::size_t>(k);
    std::call_once(flags[idx], [&] { cache[idx] = build_cardinal(k); });
    return cache[idx];
}

BivariatePolynomial interpolate_reference(const std::vector<double>& values, int k) {
    const auto& basis = cardinal_basis(k);
    if (values.size() != basis.size()) {
        throw InvalidArgument("interpolate_reference: value count does not match the stencil");
    }
    BivariatePolynomial out(k);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        out += values[i] * basis[i];
    }
    return out;
}

BivariatePolynomial reference_residual(const BivariatePolynomial& u_hat, int k) {
    const Stencil st = reference_stencil(k);
    std::vector<double> values;
    values.reserve(st.size());
    for (const auto& sp : st.points) {
        values.push_back(u_hat(sp.x));
    }
    return u_hat - interpolate_reference(values, k);
}

InterpolationResult interpolate(const std::function<double(Point)>& v, int k, const Triangle& tri) {
    check_order(k);
    const Stencil st = stencil(k, tri);
    std::vector<double> values;
    values.reserve(st.size());
    for (const auto& sp : st.points) {
        values.push_back(v(sp.x));
    }
    InterpolationResult r;
    r.reference_interpolant = interpolate_reference(values, k);
    r.interpolant = r.reference_interpolant.compose(tri.reference_map().inverse());
    return r;
}

InterpolationResult interpolate(const BivariatePolynomial& v, int k, const Triangle& tri) {
    InterpolationResult r = interpolate([&v](Point p) { return v(p); }, k, tri);
    r.residual = v - r.interpolant;
    return r;
}

double interp_error(const BivariatePolynomial& v, int k, int m, double p, const Triangle& tri) {
    check_order(k);
    const AffineMap map = tri.reference_map();
    return reference_seminorm(reference_residual(v.compose(map), k), {m, p}, map.linear);
}

double circumradius_factor(const Triangle& tri, int k, int m) {
    const auto t = triangle_metrics(tri);
    return std::pow(t.circumradius / t.diameter, m) * std::pow(t.diameter, k + 1 - m);
}

double classical_factor(const Triangle& tri, int k, int m) {
    const auto t = triangle_metrics(tri);
    return std::pow(t.diameter, k + 1) / std::pow(t.inradius, m);
}

namespace {

BoundRatio finish_ratio(double error, double semi, const Triangle& tri, int k, int m) {
    if (!(semi > 0.0)) {
        throw ZeroSeminorm("bound_ratio: |v|_{k+1} vanishes");
    }
    BoundRatio b;
    b.error = error;
    b.seminorm = semi;
    b.circumradius_bound = circumradius_factor(tri, k, m) * semi;
    b.classical_bound = classical_factor(tri, k, m) * semi;
    b.ratio = error / b.circumradius_bound;
    b.classical_ratio = error / b.classical_bound;
    return b;
}

void check_km(int k, int m) {
    check_order(k);
    if (m < 0 || m > k) {
        throw InvalidArgument("need 0 <= m <= k");
    }
}

} // namespace

BoundRatio bound_ratio(const BivariatePolynomial& v, int k, int m, double p, const Triangle& tri) {
    check_km(k, m);
    return finish_ratio(interp_error(v, k, m, p, tri), seminorm(v, {k + 1, p}, tri), tri, k, m);
}

BoundRatio bound_ratio_reference(const BivariatePolynomial& u_hat, int k, int m, double p, const Triangle& tri) {
    check_km(k, m);
    const Mat2 a = tri.reference_map().linear;
    const double err = reference_seminorm(reference_residual(u_hat, k), {m, p}, a);
    return finish_ratio(err, reference_seminorm(u_hat, {k + 1, p}, a), tri, k, m);
}

Triangle random_triangle(Rng& rng) {
    const double rho = std::pow(10.0, -4.0 * rng.uniform());
    const double theta = rng.uniform(std::numbers::pi / 3.0, std::numbers::pi - 1e-3);
    const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double scale = std::pow(10.0, rng.uniform(-1.0, 1.0));
    const bool reflect = rng.uniform() < 0.5;
    const Point shift{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    Mat2 q = Mat2::rotation(phi);
    if (reflect) {
        q = q * Mat2::diag(1.0, -1.0);
    }
    auto place = [&](Point p) { return shift + scale * (q * p); };
    return {place({0.0, 0.0}), place({1.0, 0.0}), place({rho * std::cos(theta), rho * std::sin(theta)})};
}

BivariatePolynomial random_polynomial(Rng& rng, int degree) {
    BivariatePolynomial v(degree);
    for (int i = 0; i <= degree; ++i) {
        for (int j = 0; i + j <= degree; ++j) {
            v.set_coeff(i, j, rng.uniform(-1.0, 1.0));
        }
    }
    return v;
}

Family parse_family(const std::string& name) {
    if (name == "random") return Family::random;
    if (name == "example1-left") return Family::example1_left;
    if (name == "example1-right") return Family::example1_right;
    throw InvalidArgument("unknown triangle family: " + name);
}

std::string family_name(Family f) {
    switch (f) {
    case Family::random: return "random";
    case Family::example1_left: return "example1-left";
    case Family::example1_right: return "example1-right";
    }
    return "unknown";
}

Triangle example1_left(double h, double alpha) {
    return {{0.0, 0.0}, {h, 0.0}, {0.5 * h, std::pow(h, alpha)}};
}

Triangle example1_right(double h, double alpha, double beta) {
    return {{0.0, 0.0}, {h, 0.0}, {std::pow(h, alpha), std::pow(h, beta)}};
}

SupRatio sup_bound_ratio(int k, int m, double p, const Triangle& tri, std::uint64_t seed, int random_starts,
                         int extra_degree) {
    check_km(k, m);
    if (extra_degree < 0) {
        throw InvalidArgument("sup_bound_ratio: extra_degree must be non-negative");
    }
    const int d0 = k + 1;
    const int d1 = k + 1 + extra_degree;
    const Mat2 a = tri.reference_map().linear;
    const double h = triangle_metrics(tri).diameter;
    // Pullbacks of physical monomials, scaled by h^(k+1-d). For degree k + 1 their order-(k+1) Gram
    // matrix is diagonal, whereas reference monomials span many decades on needles.
    const AffineMap lin{a, {0.0, 0.0}};
    std::vector<BivariatePolynomial> basis;
    std::vector<BivariatePolynomial> residual;
    std::vector<std::pair<int, int>> exponents;
    for (int d = d0; d <= d1; ++d) {
        for (int j = 0; j <= d; ++j) {
            BivariatePolynomial phys = BivariatePolynomial::monomial(d - j, j, std::pow(h, d0 - d));
            basis.push_back(phys.compose(lin));
            residual.push_back(reference_residual(basis.back(), k));
            exponents.emplace_back(d - j, j);
        }
    }
    const auto n = static_cast<Eigen::Index>(basis.size());
    auto to_poly = [&](const Eigen::VectorXd& c) {
        BivariatePolynomial u(d1);
        for (Eigen::Index j = 0; j < n; ++j) {
            u += c(j) * basis[static_cast<std::size_t>(j)];
        }
        return u;
    };

    const SampledSeminorm num2 = sample_seminorm(residual, m, 2.0, a);
    const SampledSeminorm den2 = sample_seminorm(basis, d0, 2.0, a);
    const QuotientMaximum eig = max_generalized_eigen(num2.gram(), den2.gram());
    const double factor = circumradius_factor(tri, k, m);
    const double classical = classical_factor(tri, k, m);

    SupRatio out;
    if (p == 2.0) {
        out.ratio = eig.value / factor;
        out.maximizer = to_poly(eig.argmax);
        out.exact = (extra_degree == 0);
    } else {
        const SampledSeminorm num = sample_seminorm(residual, m, p, a);
        const SampledSeminorm den = sample_seminorm(basis, d0, p, a);
        std::vector<Eigen::VectorXd> starts;
        starts.push_back(eig.argmax);
        for (Eigen::Index j = 0; j < n; ++j) {
            starts.push_back(Eigen::VectorXd::Unit(n, j));
        }
        // Reference monomials xi^(d0-j) eta^j expressed in the physical basis.
        const AffineMap inv_lin{a.inverse(), {0.0, 0.0}};
        for (int j = 0; j <= d0; ++j) {
            const BivariatePolynomial pb = BivariatePolynomial::monomial(d0 - j, j).compose(inv_lin);
            Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
            for (int i = 0; i <= d0; ++i) {
                c(i) = pb.coeff(d0 - i, i);
            }
            starts.push_back(c);
        }
        Rng rng(seed);
        for (int s = 0; s < random_starts; ++s) {
            Eigen::VectorXd c(n);
            for (Eigen::Index j = 0; j < n; ++j) {
                c(j) = rng.uniform(-1.0, 1.0);
            }
            starts.push_back(c);
        }
        const QuotientMaximum best = maximize_quotient(num, den, starts, 200);
        out.maximizer = to_poly(best.argmax);
        // Re-evaluated with the standard seminorm rules so the result is the ratio of a concrete v.
        out.ratio = bound_ratio_reference(out.maximizer, k, m, p, tri).ratio;
    }
    out.classical_ratio = out.ratio * factor / classical;
    return out;
}

std::vector<SweepRow> interp_sweep(int k, int m, double p, Family family, double h_min, double h_max, int samples,
                                   std::uint64_t seed, int random_starts, int extra_degree) {
    if (samples < 1 || !(h_min > 0.0) || !(h_max >= h_min)) {
        throw InvalidArgument("interp_sweep: need samples >= 1 and 0 < h_min <= h_max");
    }
    std::vector<SweepRow> rows(static_cast<std::size_t>(samples));
    parallel_for(rows.size(), [&](std::size_t i) {
        const double t = samples == 1 ? 0.0 : static_cast<double>(i) / (samples - 1);
        const double h = h_max * std::pow(h_min / h_max, t);
        Triangle tri = example1_left(h);
        if (family == Family::example1_right) {
            tri = example1_right(h);
        } else if (family == Family::random) {
            Rng rng(derive_seed(seed, i));
            const Triangle base = random_triangle(rng);
            const double s = h / triangle_metrics(base).diameter;
            const Point o = base.vertex(0);
            tri = Triangle({0.0, 0.0}, s * (base.vertex(1) - o), s * (base.vertex(2) - o));
        }
        SweepRow& row = rows[i];
        row.h = h;
        row.metrics = triangle_metrics(tri);
        const SupRatio sup = sup_bound_ratio(k, m, p, tri, seed, random_starts, extra_degree);
        row.at_sup = bound_ratio_reference(sup.maximizer, k, m, p, tri);
        row.at_sup.ratio = sup.ratio;
        row.at_sup.classical_ratio = sup.classical_ratio;
    });
    return rows;
}

} // namespace cirest
