#ifndef CIREST_POLYNOMIAL_HPP
#define CIREST_POLYNOMIAL_HPP

#include <cstddef>
#include <vector>

#include "cirest/geometry.hpp"

namespace cirest {

/// Dense polynomial sum c_ij x^i y^j over i + j <= degree.
///
/// Coefficients are stored grouped by total degree n = i + j, and within a
/// group by increasing j. Arithmetic and differentiation act on coefficients
/// only, so they are exact up to the rounding of the individual products.
class BivariatePolynomial {
public:
    BivariatePolynomial() : BivariatePolynomial(0) {}
    explicit BivariatePolynomial(int degree);

    static BivariatePolynomial constant(double c);
    static BivariatePolynomial monomial(int i, int j, double c = 1.0);
    /// c0 + cx x + cy y
    static BivariatePolynomial affine(double c0, double cx, double cy);

    static std::size_t size_for(int degree) {
        return static_cast<std::size_t>((degree + 1) * (degree + 2) / 2);
    }
    static std::size_t index(int i, int j) {
        const int n = i + j;
        return static_cast<std::size_t>(n * (n + 1) / 2 + j);
    }

    int degree() const { return degree_; }
    /// Largest total degree carrying a coefficient with |c| > tol.
    int effective_degree(double tol = 0.0) const;

    double coeff(int i, int j) const;
    void set_coeff(int i, int j, double c);
    void add_to_coeff(int i, int j, double c);
    const std::vector<double>& coefficients() const { return c_; }

    double operator()(double x, double y) const;
    double operator()(Point p) const { return (*this)(p.x, p.y); }

    BivariatePolynomial dx() const;
    BivariatePolynomial dy() const;
    /// d^a/dx^a d^b/dy^b
    BivariatePolynomial derivative(int a, int b) const;
    /// bx d/dx + by d/dy
    BivariatePolynomial directional(double bx, double by) const;
    /// One antiderivative in x (resp. y) with zero integration constant.
    BivariatePolynomial antiderivative_x() const;
    BivariatePolynomial antiderivative_y() const;

    /// p(map(x)), exact coefficient expansion.
    BivariatePolynomial compose(const AffineMap& map) const;

    /// Copy with degree raised (zero padding) or truncated.
    BivariatePolynomial with_degree(int degree) const;

    double max_abs_coefficient() const;

    BivariatePolynomial& operator+=(const BivariatePolynomial& o);
    BivariatePolynomial& operator-=(const BivariatePolynomial& o);
    BivariatePolynomial& operator*=(double s);

    friend BivariatePolynomial operator+(BivariatePolynomial a, const BivariatePolynomial& b) { return a += b; }
    friend BivariatePolynomial operator-(BivariatePolynomial a, const BivariatePolynomial& b) { return a -= b; }
    friend BivariatePolynomial operator*(double s, BivariatePolynomial a) { return a *= s; }
    friend BivariatePolynomial operator*(const BivariatePolynomial& a, const BivariatePolynomial& b);

private:
    int degree_;
    std::vector<double> c_;
};

/// Max coefficient distance |a - b|_inf (degrees may differ).
double coefficient_distance(const BivariatePolynomial& a, const BivariatePolynomial& b);

} // namespace cirest

#endif // CIREST_POLYNOMIAL_HPP
