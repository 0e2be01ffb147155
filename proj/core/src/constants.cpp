#include "cirest/constants.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "cirest/error.hpp"
#include "cirest/lagrange.hpp"
#include "cirest/quadrature.hpp"
#include "cirest/rayleigh.hpp"

namespace cirest {

std::string kind_name(EstimateKind kind) {
    switch (kind) {
    case EstimateKind::exact_root:
        return "exact-root";
    case EstimateKind::rayleigh_lower_bound:
        return "rayleigh-lower-bound";
    case EstimateKind::sampled_lower_bound:
        return "sampled-lower-bound";
    }
    return "unknown";
}

double babuska_aziz_root() {
    double lo = 0.5 * std::numbers::pi + 1e-9;
    double hi = std::numbers::pi - 1e-9;
    // t + tan t runs from -inf to about pi on this interval.
    while (hi - lo > 1e-15) {
        const double mid = 0.5 * (lo + hi);
        if (mid + std::tan(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double babuska_aziz_A2() { return 1.0 / babuska_aziz_root(); }

Triangle squeezed_triangle(double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0)) {
        throw InvalidArgument("squeezed_triangle: alpha and beta must be positive");
    }
    return {{0.0, 0.0}, {alpha, 0.0}, {0.0, beta}};
}

namespace {

// Legendre polynomials P_n(t) for n = 0..degree, with t an affine function of the coordinates.
std::vector<BivariatePolynomial> legendre_in(const BivariatePolynomial& t, int degree) {
    std::vector<BivariatePolynomial> q{BivariatePolynomial::constant(1.0), t};
    for (int n = 1; n < degree; ++n) {
        BivariatePolynomial next = t * q[static_cast<std::size_t>(n)];
        next *= (2.0 * n + 1.0) / (n + 1.0);
        BivariatePolynomial prev = q[static_cast<std::size_t>(n - 1)];
        prev *= n / (n + 1.0);
        next -= prev;
        q.push_back(std::move(next));
    }
    q.resize(static_cast<std::size_t>(degree + 1));
    return q;
}

// Orthonormal basis of { v in P_N : v = 0 on the order-k lattice }, as pullbacks to the reference
// triangle. The underlying basis is w1^i w2^j P_i(z1) P_j(z2) in the principal frame of the element
// (z_r affine, ranging over [-1, 1] across a box of widths w1 >= w2), so that all basis functions
// have order-(k+1) seminorms of comparable size on needles.
std::vector<BivariatePolynomial> vanishing_basis(int k, int n_deg, const Mat2& a) {
    const Eigen::Matrix2d am{{a.a11, a.a12}, {a.a21, a.a22}};
    const Eigen::JacobiSVD<Eigen::Matrix2d> svd(am, Eigen::ComputeFullU | Eigen::ComputeFullV);
    // Frame coordinates z = Sigma V^T xi of the element.
    const Eigen::Matrix2d f = svd.singularValues().asDiagonal() * svd.matrixV().transpose();
    std::array<double, 2> lo{0.0, 0.0};
    std::array<double, 2> hi{0.0, 0.0};
    for (int c = 0; c < 2; ++c) {
        for (int r = 0; r < 2; ++r) {
            lo[static_cast<std::size_t>(r)] = std::min(lo[static_cast<std::size_t>(r)], f(r, c));
            hi[static_cast<std::size_t>(r)] = std::max(hi[static_cast<std::size_t>(r)], f(r, c));
        }
    }
    std::array<std::vector<BivariatePolynomial>, 2> leg;
    std::array<double, 2> width{};
    for (std::size_t r = 0; r < 2; ++r) {
        width[r] = hi[r] - lo[r];
        const auto ri = static_cast<Eigen::Index>(r);
        // t = (2 z_r - lo - hi) / width in reference coordinates.
        const BivariatePolynomial t = BivariatePolynomial::affine(-(lo[r] + hi[r]) / width[r], 2.0 * f(ri, 0) / width[r],
                                                                  2.0 * f(ri, 1) / width[r]);
        leg[r] = legendre_in(t, n_deg);
    }
    std::vector<BivariatePolynomial> full;
    for (int d = 0; d <= n_deg; ++d) {
        for (int j = 0; j <= d; ++j) {
            BivariatePolynomial b = leg[0][static_cast<std::size_t>(d - j)] * leg[1][static_cast<std::size_t>(j)];
            b *= std::pow(width[0] / width[1], -j);
            full.push_back(std::move(b));
        }
    }
    const Stencil st = reference_stencil(k);
    const auto rows = static_cast<Eigen::Index>(st.size());
    const auto cols = static_cast<Eigen::Index>(full.size());
    Eigen::MatrixXd eval(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            eval(i, j) = full[static_cast<std::size_t>(j)](st.points[static_cast<std::size_t>(i)].x);
        }
    }
    // Null space of eval = trailing columns of Q in the pivoted QR of eval^T.
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(eval.transpose());
    if (qr.rank() != rows) {
        throw NumericalInconsistency("estimate_B: lattice evaluation matrix is rank deficient");
    }
    const Eigen::MatrixXd q = qr.householderQ();
    std::vector<BivariatePolynomial> out;
    for (Eigen::Index c = rows; c < cols; ++c) {
        BivariatePolynomial v(n_deg);
        for (Eigen::Index j = 0; j < cols; ++j) {
            v += q(j, c) * full[static_cast<std::size_t>(j)];
        }
        out.push_back(std::move(v));
    }
    return out;
}

std::string describe(const Triangle& tri) {
    std::ostringstream os;
    os.precision(17);
    const auto& v = tri.vertices();
    os << "(" << v[0].x << " " << v[0].y << ")(" << v[1].x << " " << v[1].y << ")(" << v[2].x << " "
       << v[2].y << ")";
    return os.str();
}

} // namespace

ConstantEstimate estimate_B(int k, int m, double p, const Triangle& tri, int basis_degree, std::uint64_t seed) {
    if (k < 1 || k > kMaxInterpolationOrder || m < 0 || m > k) {
        throw InvalidArgument("estimate_B: need 1 <= k <= 10 and 0 <= m <= k");
    }
    if (basis_degree <= k) {
        throw InvalidArgument("estimate_B: basis degree must exceed k (empty subspace)");
    }
    if (basis_degree > kMaxBasisDegree) {
        throw InvalidArgument("estimate_B: basis degree above 12");
    }
    if (!(p >= 1.0)) {
        throw InvalidArgument("estimate_B: need p >= 1");
    }
    const Mat2 a = tri.reference_map().linear;
    const auto basis = vanishing_basis(k, basis_degree, a);
    const auto n = static_cast<Eigen::Index>(basis.size());
    auto to_poly = [&](const Eigen::VectorXd& c) {
        BivariatePolynomial u(basis_degree);
        for (Eigen::Index j = 0; j < n; ++j) {
            u += c(j) * basis[static_cast<std::size_t>(j)];
        }
        const double s = u.max_abs_coefficient();
        if (s > 0.0) {
            u *= 1.0 / s;
        }
        return u;
    };

    ConstantEstimate out;
    out.basis_degree = basis_degree;
    out.k = k;
    out.m = m;
    out.p = p;
    out.triangle = describe(tri);

    const SampledSeminorm num2 = sample_seminorm(basis, m, 2.0, a);
    const SampledSeminorm den2 = sample_seminorm(basis, k + 1, 2.0, a);
    const QuotientMaximum eig = max_sampled_quotient(num2, den2);
    if (p == 2.0) {
        out.kind = EstimateKind::rayleigh_lower_bound;
        out.value = eig.value;
        out.maximizer = to_poly(eig.argmax);
        return out;
    }

    out.kind = EstimateKind::sampled_lower_bound;
    const SampledSeminorm num = sample_seminorm(basis, m, p, a);
    const SampledSeminorm den = sample_seminorm(basis, k + 1, p, a);
    std::vector<Eigen::VectorXd> starts{eig.argmax};
    Rng rng(seed);
    for (int s = 0; s < 32; ++s) {
        Eigen::VectorXd c(n);
        for (Eigen::Index j = 0; j < n; ++j) {
            c(j) = rng.uniform(-1.0, 1.0);
        }
        starts.push_back(c);
    }
    const QuotientMaximum best = maximize_quotient(num, den, starts, 500);
    out.maximizer = to_poly(best.argmax);
    out.converged = best.converged;
    const double top = reference_seminorm(out.maximizer, {m, p}, a);
    const double bottom = reference_seminorm(out.maximizer, {k + 1, p}, a);
    out.value = bottom > 0.0 ? top / bottom : 0.0;
    return out;
}

bool SqueezeTable::within(double window) const {
    return std::all_of(rows.begin(), rows.end(), [&](const SqueezeRow& r) {
        return r.relative >= 1.0 / window && r.relative <= window;
    });
}

bool SqueezeTable::below_reference(double rel_tol) const {
    return std::all_of(rows.begin(), rows.end(),
                       [&](const SqueezeRow& r) { return r.relative <= 1.0 + rel_tol; });
}

bool SqueezeTable::below_upper_bounds(double rel_tol) const {
    return std::all_of(rows.begin(), rows.end(), [&](const SqueezeRow& r) {
        return !r.upper_bound || r.estimate.value <= *r.upper_bound * (1.0 + rel_tol);
    });
}

SqueezeTable squeeze_scaling_check(int k, int m, double p, const std::vector<std::pair<double, double>>& alpha_beta,
                                   int basis_degree, std::uint64_t seed) {
    for (const auto& [al, be] : alpha_beta) {
        if (!(al > 0.0) || !(be > 0.0) || std::max(al, be) > 1.0) {
            throw InvalidArgument("squeeze_scaling_check: need 0 < alpha, beta and max(alpha, beta) <= 1");
        }
    }
    SqueezeTable table;
    table.k = k;
    table.m = m;
    table.p = p;
    table.basis_degree = basis_degree;
    table.rows.resize(alpha_beta.size());
    const ConstantEstimate ref = estimate_B(k, m, p, squeezed_triangle(1.0, 1.0), basis_degree, seed);
    table.reference = ref.value;
    parallel_for(alpha_beta.size(), [&](std::size_t i) {
        const auto [al, be] = alpha_beta[i];
        SqueezeRow& row = table.rows[i];
        row.alpha = al;
        row.beta = be;
        row.estimate = (al == 1.0 && be == 1.0)
                           ? ref
                           : estimate_B(k, m, p, squeezed_triangle(al, be), basis_degree, derive_seed(seed, i));
        const double mx = std::max(al, be);
        row.normalized = row.estimate.value / std::pow(mx, k + 1 - m);
        row.relative = ref.value > 0.0 ? row.normalized / ref.value : 0.0;
        if (k == 1 && m == 1 && p == 2.0) {
            row.upper_bound = mx * babuska_aziz_A2();
        } else if (k == 1 && m == 0) {
            row.upper_bound = mx * mx * ref.value;
        }
    });
    return table;
}

CorollaryReport corollary_error_check(int k, int m, double p, double alpha, double beta, int trials,
                                      int basis_degree, std::uint64_t seed) {
    if (trials < 0) {
        throw InvalidArgument("corollary_error_check: negative trial count");
    }
    CorollaryReport rep;
    rep.k = k;
    rep.m = m;
    rep.p = p;
    rep.alpha = alpha;
    rep.beta = beta;
    rep.trials = trials;
    if (k == 1 && m == 1 && p == 2.0) {
        rep.constant = babuska_aziz_A2();
        rep.constant_source = "A2";
    } else {
        rep.constant = estimate_B(k, m, p, squeezed_triangle(1.0, 1.0), basis_degree, seed).value * (1.0 + 1e-6);
        rep.constant_source = "reference-estimate";
    }
    const Triangle tri = squeezed_triangle(alpha, beta);
    const AffineMap to_ref = tri.reference_map().inverse();
    const double scale = std::pow(std::max(alpha, beta), k + 1 - m) * rep.constant;
    std::vector<double> ratios(static_cast<std::size_t>(trials), 0.0);
    parallel_for(ratios.size(), [&](std::size_t i) {
        Rng rng(derive_seed(seed, i));
        const int deg = k + 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(basis_degree - k));
        const BivariatePolynomial v = random_polynomial(rng, deg).compose(to_ref);
        const double top = interp_error(v, k, m, p, tri);
        const double bottom = seminorm(v, {k + 1, p}, tri);
        ratios[i] = bottom > 0.0 ? top / (scale * bottom) : 0.0;
    });
    for (double r : ratios) {
        rep.worst = std::max(rep.worst, r);
        if (r > 1.0) {
            ++rep.violations;
        }
    }
    return rep;
}

} // namespace cirest
