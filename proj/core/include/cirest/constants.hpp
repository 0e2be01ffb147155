#ifndef CIREST_CONSTANTS_HPP
#define CIREST_CONSTANTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cirest/geometry.hpp"
#include "cirest/parallel.hpp"
#include "cirest/polynomial.hpp"

namespace cirest {

enum class EstimateKind { exact_root, rayleigh_lower_bound, sampled_lower_bound };

std::string kind_name(EstimateKind kind);

struct ConstantEstimate {
    double value = 0.0;
    EstimateKind kind = EstimateKind::rayleigh_lower_bound;
    int basis_degree = 0;
    int k = 0;
    int m = 0;
    double p = 2.0;
    std::string triangle;
    BivariatePolynomial maximizer; // pullback to the reference triangle
    bool converged = true;
};

/// Smallest root of t + tan t = 0 in (pi/2, pi), about 2.02876.
double babuska_aziz_root();
/// A_2 = 1 / babuska_aziz_root(), about 0.49291.
double babuska_aziz_A2();

/// (0,0), (alpha,0), (0,beta).
Triangle squeezed_triangle(double alpha, double beta);

constexpr int kMaxBasisDegree = 12;

/// Lower bound for sup |v|_{m,p} / |v|_{k+1,p} over v in P_N vanishing on the order-k lattice of tri.
/// p = 2 solves a generalized eigenproblem; other p use multi-start ascent from the p = 2 maximizer.
ConstantEstimate estimate_B(int k, int m, double p, const Triangle& tri, int basis_degree,
                            std::uint64_t seed = kDefaultSeed);

struct SqueezeRow {
    double alpha = 1.0;
    double beta = 1.0;
    ConstantEstimate estimate;
    double normalized = 0.0;  // estimate / max(alpha, beta)^(k+1-m)
    double relative = 0.0;    // normalized / normalized at (1, 1)
    std::optional<double> upper_bound; // proven bound on the estimate when one is known
};

struct SqueezeTable {
    int k = 0;
    int m = 0;
    double p = 2.0;
    int basis_degree = 0;
    double reference = 0.0; // normalized value at (1, 1)
    std::vector<SqueezeRow> rows;

    /// Every relative value lies in [1/window, window].
    bool within(double window) const;
    /// No normalized value exceeds the (1, 1) value by more than rel_tol.
    bool below_reference(double rel_tol) const;
    /// No estimate exceeds its known upper bound by more than rel_tol.
    bool below_upper_bounds(double rel_tol) const;
};

/// Known bounds: (1,1,2) by max(alpha, beta) A_2; (1,0,p) by max(alpha, beta)^2 times the estimate on
/// the reference triangle with the same basis degree.
SqueezeTable squeeze_scaling_check(int k, int m, double p, const std::vector<std::pair<double, double>>& alpha_beta,
                                   int basis_degree, std::uint64_t seed = kDefaultSeed);

struct CorollaryReport {
    int k = 0;
    int m = 0;
    double p = 2.0;
    double alpha = 1.0;
    double beta = 1.0;
    double constant = 0.0;   // C_hat
    std::string constant_source;
    int trials = 0;
    int violations = 0;
    double worst = 0.0; // max of |v - I v|_{m,p} / (max(alpha, beta)^(k+1-m) C_hat |v|_{k+1,p})
};

/// Random v of degree k+1 .. basis_degree on K_{alpha beta}, checked against
/// max(alpha, beta)^(k+1-m) C_hat |v|_{k+1,p}. C_hat is A_2 for (1,1,2) and otherwise the estimate on
/// the reference triangle with the same basis degree, times (1 + 1e-6).
CorollaryReport corollary_error_check(int k, int m, double p, double alpha, double beta, int trials,
                                      int basis_degree = 8, std::uint64_t seed = kDefaultSeed);

} // namespace cirest

#endif // CIREST_CONSTANTS_HPP
