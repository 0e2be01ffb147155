#ifndef CIREST_RAYLEIGH_HPP
#define CIREST_RAYLEIGH_HPP

#include <Eigen/Dense>
#include <vector>

#include "cirest/geometry.hpp"
#include "cirest/polynomial.hpp"

namespace cirest {

/// Discretized seminorm of span{phi_i} on K = A(K_hat) + b.
///
/// For finite p the value of c is (sum_r w_r |(V c)_r|^p)^(1/p); for p = inf it is max_r |(V c)_r|.
/// Rows run over sample nodes times the m + 1 derivative directions, and weights carry the
/// quadrature weight, the area and the multinomial factor.
struct SampledSeminorm {
    Eigen::MatrixXd values;
    Eigen::VectorXd weights;
    double p = 2.0;

    double operator()(const Eigen::VectorXd& c) const;
    /// Gradient (a subgradient for p = 1 or p = inf) of the seminorm value.
    Eigen::VectorXd gradient(const Eigen::VectorXd& c) const;
    /// V^T diag(w) V, i.e. the Gram matrix of the squared seminorm for p = 2.
    Eigen::MatrixXd gram() const;
};

/// Samples |.|_{m,p,K} for the pullbacks basis_hat; exact for p = 2 and even integer p.
SampledSeminorm sample_seminorm(const std::vector<BivariatePolynomial>& basis_hat, int m, double p,
                                const Mat2& a);

struct QuotientMaximum {
    double value = 0.0;
    Eigen::VectorXd argmax;
    int iterations = 0;
    bool converged = false;
};

/// Local ascent on num(c) / den(c) from each start: normalized gradient steps on the log quotient
/// with step halving, at most max_iterations per start. Keeps the best quotient seen.
QuotientMaximum maximize_quotient(const SampledSeminorm& num, const SampledSeminorm& den,
                                  const std::vector<Eigen::VectorXd>& starts, int max_iterations = 500);

/// Largest generalized eigenpair of (num, den). After Jacobi scaling, den is deflated below
/// rel_tol * trace.
/// Returns sqrt(lambda_max) and the maximizing coefficient vector.
QuotientMaximum max_generalized_eigen(const Eigen::MatrixXd& num, const Eigen::MatrixXd& den,
                                      double rel_tol = 1e-12);

/// p = 2 maximum of num / den from the weighted sample matrices (pivoted QR of den, then an SVD),
/// avoiding the squared condition number of the Gram matrices.
QuotientMaximum max_sampled_quotient(const SampledSeminorm& num, const SampledSeminorm& den);

} // namespace cirest

#endif // CIREST_RAYLEIGH_HPP
