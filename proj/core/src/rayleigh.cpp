#include "cirest/rayleigh.hpp"

#include <algorithm>
#include <cmath>

#include "cirest/error.hpp"
#include "cirest/quadrature.hpp"

namespace cirest {

double SampledSeminorm::operator()(const Eigen::VectorXd& c) const {
    const Eigen::VectorXd r = values * c;
    if (std::isinf(p)) {
        return r.cwiseAbs().maxCoeff();
    }
    if (p == 2.0) {
        return std::sqrt(weights.dot(r.cwiseProduct(r)));
    }
    return std::pow(weights.dot(r.cwiseAbs().array().pow(p).matrix()), 1.0 / p);
}

Eigen::VectorXd SampledSeminorm::gradient(const Eigen::VectorXd& c) const {
    const Eigen::VectorXd r = values * c;
    if (std::isinf(p)) {
        Eigen::Index row = 0;
        r.cwiseAbs().maxCoeff(&row);
        const double sign = r(row) >= 0.0 ? 1.0 : -1.0;
        return sign * values.row(row).transpose();
    }
    const double s = weights.dot(r.cwiseAbs().array().pow(p).matrix());
    if (s == 0.0) {
        return Eigen::VectorXd::Zero(c.size());
    }
    Eigen::VectorXd t(r.size());
    for (Eigen::Index i = 0; i < r.size(); ++i) {
        const double sign = r(i) > 0.0 ? 1.0 : (r(i) < 0.0 ? -1.0 : 0.0);
        t(i) = weights(i) * std::pow(std::abs(r(i)), p - 1.0) * sign;
    }
    return std::pow(s, 1.0 / p - 1.0) * (values.transpose() * t);
}

Eigen::MatrixXd SampledSeminorm::gram() const {
    return values.transpose() * weights.asDiagonal() * values;
}

SampledSeminorm sample_seminorm(const std::vector<BivariatePolynomial>& basis_hat, int m, double p,
                                const Mat2& a) {
    if (m < 0 || !(p >= 1.0)) {
        throw InvalidArgument("sample_seminorm: need m >= 0 and p >= 1");
    }
    const auto n = static_cast<Eigen::Index>(basis_hat.size());
    std::vector<std::vector<BivariatePolynomial>> derivs;
    int d = 0;
    for (const auto& phi : basis_hat) {
        derivs.push_back(physical_derivatives(phi, m, a));
        for (const auto& g : derivs.back()) {
            d = std::max(d, g.effective_degree());
        }
    }
    std::vector<Point> nodes;
    std::vector<double> node_weights;
    if (std::isinf(p)) {
        for (const auto& b : barycentric_lattice(kInfinityLatticeLevel)) {
            nodes.push_back({b[1], b[2]});
            node_weights.push_back(1.0);
        }
    } else {
        const int q = (p == 2.0) ? std::clamp(2 * d, 1, kMaxQuadratureDegree) : seminorm_quadrature_degree(d, p);
        const QuadratureRule& rule = rule_for_degree(q);
        const double area = 0.5 * std::abs(a.det());
        for (std::size_t i = 0; i < rule.size(); ++i) {
            nodes.push_back(rule.reference_point(i));
            node_weights.push_back(rule.weights[i] * area);
        }
    }
    const auto rows = static_cast<Eigen::Index>(nodes.size()) * (m + 1);
    SampledSeminorm s;
    s.p = p;
    s.values.resize(rows, n);
    s.weights.resize(rows);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (int k = 0; k <= m; ++k) {
            const auto r = static_cast<Eigen::Index>(i) * (m + 1) + k;
            s.weights(r) = std::isinf(p) ? 1.0 : node_weights[i] * multinomial(k, m - k);
            for (Eigen::Index j = 0; j < n; ++j) {
                s.values(r, j) = derivs[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)](nodes[i]);
            }
        }
    }
    return s;
}

QuotientMaximum maximize_quotient(const SampledSeminorm& num, const SampledSeminorm& den,
                                  const std::vector<Eigen::VectorXd>& starts, int max_iterations) {
    QuotientMaximum best;
    best.value = -1.0;
    for (const auto& start : starts) {
        if (start.norm() == 0.0) {
            continue;
        }
        Eigen::VectorXd c = start.normalized();
        double dn = den(c);
        if (!(dn > 0.0)) {
            continue;
        }
        double q = num(c) / dn;
        double step = 0.25;
        int it = 0;
        bool converged = false;
        for (; it < max_iterations; ++it) {
            const double nn = num(c);
            Eigen::VectorXd g = -den.gradient(c) / dn;
            if (nn > 0.0) {
                g += num.gradient(c) / nn;
            }
            g -= g.dot(c) * c;
            const double gn = g.norm();
            if (!(gn > 0.0) || !std::isfinite(gn)) {
                converged = true;
                break;
            }
            bool accepted = false;
            while (step > 1e-12) {
                const Eigen::VectorXd trial = (c + step * g / gn).normalized();
                const double td = den(trial);
                const double tq = td > 0.0 ? num(trial) / td : -1.0;
                if (tq > q) {
                    c = trial;
                    dn = td;
                    q = tq;
                    step = std::min(2.0 * step, 1.0);
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) {
                converged = true;
                break;
            }
        }
        if (q > best.value) {
            best.value = q;
            best.argmax = c;
            best.iterations = it;
            best.converged = converged;
        }
    }
    if (best.value < 0.0) {
        best.value = 0.0;
    }
    return best;
}

QuotientMaximum max_generalized_eigen(const Eigen::MatrixXd& num, const Eigen::MatrixXd& den, double rel_tol) {
    // Jacobi scaling first, so the deflation cutoff does not depend on how the basis is scaled.
    Eigen::VectorXd scale(den.rows());
    for (Eigen::Index i = 0; i < den.rows(); ++i) {
        scale(i) = den(i, i) > 0.0 ? 1.0 / std::sqrt(den(i, i)) : 1.0;
    }
    const Eigen::MatrixXd den_s = scale.asDiagonal() * den * scale.asDiagonal();
    const Eigen::MatrixXd num_s = scale.asDiagonal() * num * scale.asDiagonal();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(den_s);
    if (es.info() != Eigen::Success) {
        throw NumericalInconsistency("max_generalized_eigen: eigen-decomposition failed");
    }
    const double cutoff = rel_tol * den_s.trace();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < den_s.rows(); ++i) {
        if (es.eigenvalues()(i) > cutoff) {
            keep.push_back(i);
        }
    }
    QuotientMaximum out;
    if (keep.empty()) {
        return out;
    }
    Eigen::MatrixXd w(den_s.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) {
        w.col(static_cast<Eigen::Index>(j)) =
            es.eigenvectors().col(keep[j]) / std::sqrt(es.eigenvalues()(keep[j]));
    }
    Eigen::MatrixXd reduced = w.transpose() * num_s * w;
    reduced = 0.5 * (reduced + reduced.transpose());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rs(reduced);
    const Eigen::Index top = reduced.rows() - 1;
    out.value = std::sqrt(std::max(rs.eigenvalues()(top), 0.0));
    out.argmax = (scale.asDiagonal() * (w * rs.eigenvectors().col(top))).normalized();
    out.converged = true;
    return out;
}

QuotientMaximum max_sampled_quotient(const SampledSeminorm& num, const SampledSeminorm& den) {
    if (num.p != 2.0 || den.p != 2.0) {
        throw InvalidArgument("max_sampled_quotient: needs p = 2 samples");
    }
    const Eigen::MatrixXd a_den = den.weights.cwiseSqrt().asDiagonal() * den.values;
    const Eigen::MatrixXd a_num = num.weights.cwiseSqrt().asDiagonal() * num.values;
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a_den);
    const Eigen::Index r = qr.rank();
    QuotientMaximum out;
    if (r == 0) {
        return out;
    }
    // On the column space kept by the pivoting, den(P [y; 0]) = |R11 y|, so with z = R11 y the
    // quotient is |a_num P1 R11^{-1} z| / |z|.
    const Eigen::MatrixXd r11 = qr.matrixR().topLeftCorner(r, r).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd num_p = (a_num * qr.colsPermutation()).leftCols(r);
    const Eigen::MatrixXd m = r11.transpose().triangularView<Eigen::Lower>().solve(num_p.transpose()).transpose();
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinV);
    out.value = svd.singularValues()(0);
    const Eigen::VectorXd y = r11.triangularView<Eigen::Upper>().solve(Eigen::VectorXd(svd.matrixV().col(0)));
    Eigen::VectorXd c = Eigen::VectorXd::Zero(den.values.cols());
    c.head(r) = y;
    out.argmax = (qr.colsPermutation() * c).normalized();
    out.converged = true;
    return out;
}

} // namespace cirest
