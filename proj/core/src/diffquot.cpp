#include "cirest/diffquot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cirest/error.hpp"
#include "cirest/lagrange.hpp"
#include "cirest/quadrature.hpp"

namespace cirest {

DividedDifferenceTable divided_difference(const std::function<double(double)>& f, const std::vector<double>& nodes) {
    if (nodes.empty()) {
        throw InvalidArgument("divided_difference: no nodes");
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
            if (nodes[i] == nodes[j]) {
                throw InvalidArgument("divided_difference: repeated node");
            }
        }
    }
    DividedDifferenceTable t;
    t.nodes = nodes;
    std::vector<double> col;
    for (double x : nodes) {
        col.push_back(f(x));
    }
    t.columns.push_back(col);
    for (std::size_t d = 1; d < nodes.size(); ++d) {
        const auto& prev = t.columns.back();
        std::vector<double> next(nodes.size() - d);
        for (std::size_t i = 0; i + d < nodes.size(); ++i) {
            next[i] = (prev[i + 1] - prev[i]) / (nodes[i + d] - nodes[i]);
        }
        t.columns.push_back(std::move(next));
    }
    return t;
}

namespace {

// w_1 = u_1, w_{i+1} = w_i u_{i+1}; Jacobian prod_i w_i for i < dim.
void nested(const std::function<double(const std::vector<double>&)>& g, const GaussRule1D& rule, int level,
            std::vector<double>& w, double weight, double& sum) {
    const auto dim = static_cast<int>(w.size());
    if (level == dim) {
        sum += weight * g(w);
        return;
    }
    const double upper = level == 0 ? 1.0 : w[static_cast<std::size_t>(level - 1)];
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        w[static_cast<std::size_t>(level)] = upper * rule.nodes[i];
        nested(g, rule, level + 1, w, weight * upper * rule.weights[i], sum);
    }
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) {
        r *= i;
    }
    return r;
}

void check_k(int k) {
    if (k < 1) {
        throw InvalidArgument("order k must be positive");
    }
}

void require_feasible(int k, const MultiIndex& gamma, const MultiIndex& delta) {
    check_k(k);
    if (!box_feasible(k, gamma, delta)) {
        throw InvalidArgument("infeasible (gamma, delta) for the order-k lattice");
    }
}

} // namespace

double ordered_simplex_integral(const std::function<double(const std::vector<double>&)>& g, int dim, int n) {
    if (dim < 0 || n < 1) {
        throw InvalidArgument("ordered_simplex_integral: need dim >= 0 and n >= 1");
    }
    std::vector<double> w(static_cast<std::size_t>(dim));
    if (dim == 0) {
        return g(w);
    }
    const GaussRule1D rule = gauss_legendre(n);
    double sum = 0.0;
    nested(g, rule, 0, w, 1.0, sum);
    return sum;
}

double integral_representation_check(const BivariatePolynomial& f, const std::vector<double>& nodes) {
    if (nodes.size() < 2) {
        throw InvalidArgument("integral_representation_check: need at least two nodes");
    }
    for (int i = 0; i <= f.degree(); ++i) {
        for (int j = 1; i + j <= f.degree(); ++j) {
            if (f.coeff(i, j) != 0.0) {
                throw InvalidArgument("integral_representation_check: f must not depend on y");
            }
        }
    }
    const auto n = static_cast<int>(nodes.size()) - 1;
    const DividedDifferenceTable t = divided_difference([&](double x) { return f(x, 0.0); }, nodes);
    const BivariatePolynomial dn = f.derivative(n, 0);
    const int pts = (std::max(dn.degree(), 0) + n) / 2 + 1;
    const double integral = ordered_simplex_integral(
        [&](const std::vector<double>& tv) {
            double x = nodes[0];
            for (int i = 1; i <= n; ++i) {
                x += tv[static_cast<std::size_t>(i - 1)] * (nodes[static_cast<std::size_t>(i)] -
                                                            nodes[static_cast<std::size_t>(i - 1)]);
            }
            return dn(x, 0.0);
        },
        n, pts);
    return std::abs(t.top() - integral);
}

bool box_feasible(int k, const MultiIndex& gamma, const MultiIndex& delta) {
    if (gamma[0] < 0 || gamma[1] < 0 || delta[0] < 0 || delta[1] < 0) {
        return false;
    }
    // The far corner gamma + delta is the binding one.
    return gamma[0] + gamma[1] + delta[0] + delta[1] <= k;
}

GridQuotient grid_quotient(const std::function<double(Point)>& f, int k, const MultiIndex& gamma,
                           const MultiIndex& delta) {
    require_feasible(k, gamma, delta);
    const int t = delta[0];
    const int s = delta[1];
    double sum = 0.0;
    for (int a = 0; a <= t; ++a) {
        for (int b = 0; b <= s; ++b) {
            const double sign = ((t - a) + (s - b)) % 2 == 0 ? 1.0 : -1.0;
            const double c = sign / (factorial(a) * factorial(b) * factorial(t - a) * factorial(s - b));
            sum += c * f({static_cast<double>(gamma[0] + a) / k, static_cast<double>(gamma[1] + b) / k});
        }
    }
    GridQuotient g;
    g.k = k;
    g.gamma = gamma;
    g.delta = delta;
    g.value = std::pow(static_cast<double>(k), t + s) * sum;
    return g;
}

BoxDomain box_domain(int k, const MultiIndex& gamma, const MultiIndex& delta) {
    require_feasible(k, gamma, delta);
    if (delta[0] + delta[1] < 1) {
        throw InvalidArgument("box_domain: need |delta| >= 1");
    }
    BoxDomain b;
    b.gamma = gamma;
    b.delta = delta;
    b.lower = {static_cast<double>(gamma[0]) / k, static_cast<double>(gamma[1]) / k};
    b.upper = {static_cast<double>(gamma[0] + delta[0]) / k, static_cast<double>(gamma[1] + delta[1]) / k};
    return b;
}

double box_integral(const BivariatePolynomial& v, int k, const MultiIndex& gamma, const MultiIndex& delta) {
    box_domain(k, gamma, delta);
    BivariatePolynomial f = v;
    for (int i = 0; i < delta[0]; ++i) {
        f = f.antiderivative_x();
    }
    for (int i = 0; i < delta[1]; ++i) {
        f = f.antiderivative_y();
    }
    return grid_quotient([&f](Point x) { return f(x); }, k, gamma, delta).value;
}

double box_integral_quadrature(const std::function<double(Point)>& v, int k, const MultiIndex& gamma,
                               const MultiIndex& delta, int points_per_level) {
    box_domain(k, gamma, delta);
    const int t = delta[0];
    const int s = delta[1];
    const double x0 = static_cast<double>(gamma[0]) / k;
    const double y0 = static_cast<double>(gamma[1]) / k;
    // Product of the two ordered simplices S_t (x steps) and S_s (y steps).
    return ordered_simplex_integral(
        [&](const std::vector<double>& w) {
            const double y = y0 + std::accumulate(w.begin(), w.end(), 0.0) / k;
            return ordered_simplex_integral(
                [&](const std::vector<double>& z) {
                    return v({x0 + std::accumulate(z.begin(), z.end(), 0.0) / k, y});
                },
                t, points_per_level);
        },
        s, points_per_level);
}

std::vector<MultiIndex> box_bases(int k, const MultiIndex& delta) {
    check_k(k);
    std::vector<MultiIndex> out;
    for (int l = 0; l <= k; ++l) {
        for (int q = 0; l + q <= k; ++q) {
            if (box_feasible(k, {l, q}, delta)) {
                out.push_back({l, q});
            }
        }
    }
    return out;
}

double residual_vanishing(const BivariatePolynomial& v, int k) {
    const BivariatePolynomial u = reference_residual(v, k);
    double worst = 0.0;
    for (int t = 0; t <= k; ++t) {
        for (int s = 0; t + s <= k; ++s) {
            if (t + s == 0) {
                continue;
            }
            const MultiIndex delta{t, s};
            const BivariatePolynomial du = u.derivative(t, s);
            for (const auto& gamma : box_bases(k, delta)) {
                worst = std::max(worst, std::abs(grid_quotient([&u](Point x) { return u(x); }, k, gamma, delta).value));
                worst = std::max(worst, std::abs(box_integral(du, k, gamma, delta)));
            }
        }
    }
    return worst;
}

UnisolvenceSystem unisolvence_matrix(int k, const MultiIndex& delta) {
    check_k(k);
    const int n = k - delta[0] - delta[1];
    if (delta[0] < 0 || delta[1] < 0 || n < 0) {
        throw InvalidArgument("unisolvence_matrix: need |delta| <= k");
    }
    UnisolvenceSystem sys;
    sys.k = k;
    sys.delta = delta;
    sys.bases = box_bases(k, delta);
    const auto rows = static_cast<Eigen::Index>(sys.bases.size());
    const auto cols = static_cast<Eigen::Index>(BivariatePolynomial::size_for(n));
    sys.matrix.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const MultiIndex& g = sys.bases[static_cast<std::size_t>(r)];
        Eigen::Index c = 0;
        for (int d = 0; d <= n; ++d) {
            for (int j = 0; j <= d; ++j) {
                const BivariatePolynomial mono = BivariatePolynomial::monomial(d - j, j);
                // |delta| = 0 degenerates to point evaluation at the lattice node.
                sys.matrix(r, c++) = (n == k) ? mono(static_cast<double>(g[0]) / k, static_cast<double>(g[1]) / k)
                                              : box_integral(mono, k, g, delta);
            }
        }
    }
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys.matrix);
    const auto& sv = svd.singularValues();
    sys.max_singular = sv.size() > 0 ? sv(0) : 0.0;
    sys.min_singular = sv.size() > 0 ? sv(sv.size() - 1) : 0.0;
    sys.nonsingular = rows == cols && sys.min_singular > 1e-10 * sys.max_singular;
    return sys;
}

namespace {

IdentityCheck finish(std::string name, double residual, double tolerance) {
    return {std::move(name), residual, tolerance, residual <= tolerance};
}

double scaled_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); }

std::vector<double> jittered_nodes(Rng& rng, int count) {
    std::vector<double> x;
    for (int i = 0; i < count; ++i) {
        x.push_back(-1.0 + 2.0 * (i + 0.5 + rng.uniform(-0.3, 0.3)) / count);
    }
    return x;
}

} // namespace

std::vector<IdentityCheck> identity_suite(std::uint64_t seed) {
    std::vector<IdentityCheck> out;
    Rng rng(seed);

    double lead = 0.0;
    double intquo = 0.0;
    for (int n = 1; n <= 6; ++n) {
        for (int trial = 0; trial < 20; ++trial) {
            const auto nodes = jittered_nodes(rng, n + 1);
            const auto t = divided_difference([n](double x) { return std::pow(x, n); }, nodes);
            lead = std::max(lead, std::abs(t.top() - 1.0));
            BivariatePolynomial f(6);
            for (int i = 0; i <= 6; ++i) {
                f.set_coeff(i, 0, rng.uniform(-1.0, 1.0));
            }
            intquo = std::max(intquo, integral_representation_check(f, nodes));
        }
    }
    out.push_back(finish("leading-coefficient", lead, 1e-10));
    out.push_back(finish("integral-representation", intquo, 1e-10));

    double recursion = 0.0;
    double duality = 0.0;
    double duality_quad = 0.0;
    double vanishing = 0.0;
    for (int k = 1; k <= 4; ++k) {
        for (int deg = 0; deg <= 6; ++deg) {
            const BivariatePolynomial f = random_polynomial(rng, deg);
            const auto fx = [&f](Point x) { return f(x); };
            vanishing = std::max(vanishing, residual_vanishing(f, k));
            for (int t = 0; t <= k; ++t) {
                for (int s = 0; t + s <= k; ++s) {
                    if (t + s == 0) {
                        continue;
                    }
                    const MultiIndex delta{t, s};
                    const BivariatePolynomial df = f.derivative(t, s);
                    const int pts = (std::max(df.degree(), 0) + t + s) / 2 + 1;
                    for (const auto& gamma : box_bases(k, delta)) {
                        const double q = grid_quotient(fx, k, gamma, delta).value;
                        duality = std::max(duality, scaled_diff(q, box_integral(df, k, gamma, delta)));
                        duality_quad = std::max(
                            duality_quad,
                            scaled_diff(q, box_integral_quadrature([&df](Point x) { return df(x); }, k, gamma,
                                                                   delta, pts)));
                        for (int dir = 0; dir < 2; ++dir) {
                            if (delta[static_cast<std::size_t>(dir)] == 0) {
                                continue;
                            }
                            MultiIndex eta{0, 0};
                            eta[static_cast<std::size_t>(dir)] = 1;
                            const MultiIndex shifted{gamma[0] + eta[0], gamma[1] + eta[1]};
                            const MultiIndex reduced{delta[0] - eta[0], delta[1] - eta[1]};
                            const double rhs = static_cast<double>(k) / delta[static_cast<std::size_t>(dir)] *
                                               (grid_quotient(fx, k, shifted, reduced).value -
                                                grid_quotient(fx, k, gamma, reduced).value);
                            recursion = std::max(recursion, scaled_diff(q, rhs));
                        }
                    }
                }
            }
        }
    }
    out.push_back(finish("recursion", recursion, 1e-10));
    out.push_back(finish("quotient-box-duality", duality, 1e-10));
    out.push_back(finish("quotient-box-duality-quadrature", duality_quad, 1e-10));
    out.push_back(finish("residual-vanishing", vanishing, 1e-10));

    // q = a + b x + c y (k = 2) and a + b x + c y + d x^2 + e y^2 + f xy (k = 3), step (1, 0).
    double k2 = 0.0;
    for (int mask = 0; mask < 8; ++mask) {
        const double a = mask & 1, b = (mask >> 1) & 1, c = (mask >> 2) & 1;
        const BivariatePolynomial q = BivariatePolynomial::affine(a, b, c);
        k2 = std::max(k2, std::abs(box_integral(q, 2, {0, 0}, {1, 0}) - (a + b / 4.0)));
        k2 = std::max(k2, std::abs(box_integral(q, 2, {1, 0}, {1, 0}) - (a + 3.0 * b / 4.0)));
        k2 = std::max(k2, std::abs(box_integral(q, 2, {0, 1}, {1, 0}) - (a + b / 4.0 + c / 2.0)));
    }
    out.push_back(finish("box-values-k2", k2, 1e-12));
    double k3 = 0.0;
    for (int mask = 0; mask < 64; ++mask) {
        double co[6];
        for (int i = 0; i < 6; ++i) {
            co[i] = (mask >> i) & 1;
        }
        const auto [a, b, c, d, e, f] = co;
        BivariatePolynomial q = BivariatePolynomial::affine(a, b, c).with_degree(2);
        q.set_coeff(2, 0, d);
        q.set_coeff(0, 2, e);
        q.set_coeff(1, 1, f);
        k3 = std::max(k3, std::abs(box_integral(q, 3, {0, 0}, {1, 0}) - (a + b / 6.0 + d / 27.0)));
        k3 = std::max(k3, std::abs(box_integral(q, 3, {1, 0}, {1, 0}) - (a + b / 2.0 + 7.0 * d / 27.0)));
        k3 = std::max(k3, std::abs(box_integral(q, 3, {2, 0}, {1, 0}) - (a + 5.0 * b / 6.0 + 19.0 * d / 27.0)));
        if (a == 0.0 && b == 0.0 && d == 0.0) {
            k3 = std::max(k3, std::abs(box_integral(q, 3, {0, 1}, {1, 0}) - (c / 3.0 + e / 9.0 + f / 18.0)));
            k3 = std::max(k3, std::abs(box_integral(q, 3, {1, 1}, {1, 0}) - (c / 3.0 + e / 9.0 + f / 6.0)));
            k3 = std::max(k3, std::abs(box_integral(q, 3, {0, 2}, {1, 0}) - (2.0 * c / 3.0 + 4.0 * e / 9.0 + f / 9.0)));
        }
    }
    out.push_back(finish("box-values-k3", k3, 1e-12));

    double worst_cond = 0.0;
    for (int k = 1; k <= 5; ++k) {
        for (int t = 0; t <= k; ++t) {
            for (int s = 0; t + s <= k; ++s) {
                const auto sys = unisolvence_matrix(k, {t, s});
                const double cond = sys.nonsingular ? sys.max_singular / sys.min_singular
                                                    : std::numeric_limits<double>::infinity();
                worst_cond = std::max(worst_cond, cond);
            }
        }
    }
    out.push_back(finish("unisolvence-condition", worst_cond, 1e10));
    return out;
}

} // namespace cirest
