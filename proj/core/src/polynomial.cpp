#include "cirest/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "cirest/error.hpp"

namespace cirest {

BivariatePolynomial::BivariatePolynomial(int degree) : degree_(degree) {
    if (degree < 0) {
        throw InvalidArgument("BivariatePolynomial: negative degree");
    }
    c_.assign(size_for(degree), 0.0);
}

BivariatePolynomial BivariatePolynomial::constant(double c) {
    BivariatePolynomial p(0);
    p.c_[0] = c;
    return p;
}

BivariatePolynomial BivariatePolynomial::monomial(int i, int j, double c) {
    BivariatePolynomial p(i + j);
    p.set_coeff(i, j, c);
    return p;
}

BivariatePolynomial BivariatePolynomial::affine(double c0, double cx, double cy) {
    BivariatePolynomial p(1);
    p.c_[index(0, 0)] = c0;
    p.c_[index(1, 0)] = cx;
    p.c_[index(0, 1)] = cy;
    return p;
}

int BivariatePolynomial::effective_degree(double tol) const {
    for (int n = degree_; n > 0; --n) {
        for (int j = 0; j <= n; ++j) {
            if (std::abs(c_[index(n - j, j)]) > tol) {
                return n;
            }
        }
    }
    return 0;
}

double BivariatePolynomial::coeff(int i, int j) const {
    if (i < 0 || j < 0 || i + j > degree_) {
        return 0.0;
    }
    return c_[index(i, j)];
}

void BivariatePolynomial::set_coeff(int i, int j, double c) {
    if (i < 0 || j < 0 || i + j > degree_) {
        throw InvalidArgument("BivariatePolynomial::set_coeff: index outside degree");
    }
    c_[index(i, j)] = c;
}

void BivariatePolynomial::add_to_coeff(int i, int j, double c) {
    if (i < 0 || j < 0 || i + j > degree_) {
        throw InvalidArgument("BivariatePolynomial::add_to_coeff: index outside degree");
    }
    c_[index(i, j)] += c;
}

double BivariatePolynomial::operator()(double x, double y) const {
    // Horner in y for each power of x, then Horner in x.
    double result = 0.0;
    for (int i = degree_; i >= 0; --i) {
        double inner = 0.0;
        for (int j = degree_ - i; j >= 0; --j) {
            inner = inner * y + c_[index(i, j)];
        }
        result = result * x + inner;
    }
    return result;
}

BivariatePolynomial BivariatePolynomial::dx() const {
    BivariatePolynomial d(std::max(degree_ - 1, 0));
    for (int i = 1; i <= degree_; ++i) {
        for (int j = 0; i + j <= degree_; ++j) {
            d.c_[index(i - 1, j)] = static_cast<double>(i) * c_[index(i, j)];
        }
    }
    return d;
}

BivariatePolynomial BivariatePolynomial::dy() const {
    BivariatePolynomial d(std::max(degree_ - 1, 0));
    for (int i = 0; i <= degree_; ++i) {
        for (int j = 1; i + j <= degree_; ++j) {
            d.c_[index(i, j - 1)] = static_cast<double>(j) * c_[index(i, j)];
        }
    }
    return d;
}

BivariatePolynomial BivariatePolynomial::derivative(int a, int b) const {
    BivariatePolynomial d = *this;
    for (int r = 0; r < a; ++r) {
        d = d.dx();
    }
    for (int r = 0; r < b; ++r) {
        d = d.dy();
    }
    return d;
}

BivariatePolynomial BivariatePolynomial::directional(double bx, double by) const {
    BivariatePolynomial d = dx();
    d *= bx;
    BivariatePolynomial e = dy();
    e *= by;
    return d += e;
}

BivariatePolynomial BivariatePolynomial::antiderivative_x() const {
    BivariatePolynomial a(degree_ + 1);
    for (int i = 0; i <= degree_; ++i) {
        for (int j = 0; i + j <= degree_; ++j) {
            a.c_[index(i + 1, j)] = c_[index(i, j)] / static_cast<double>(i + 1);
        }
    }
    return a;
}

BivariatePolynomial BivariatePolynomial::antiderivative_y() const {
    BivariatePolynomial a(degree_ + 1);
    for (int i = 0; i <= degree_; ++i) {
        for (int j = 0; i + j <= degree_; ++j) {
            a.c_[index(i, j + 1)] = c_[index(i, j)] / static_cast<double>(j + 1);
        }
    }
    return a;
}

BivariatePolynomial BivariatePolynomial::compose(const AffineMap& map) const {
    const Mat2& m = map.linear;
    const BivariatePolynomial X = affine(map.offset.x, m.a11, m.a12);
    const BivariatePolynomial Y = affine(map.offset.y, m.a21, m.a22);
    std::vector<BivariatePolynomial> xp{constant(1.0)};
    std::vector<BivariatePolynomial> yp{constant(1.0)};
    for (int n = 1; n <= degree_; ++n) {
        xp.push_back(xp.back() * X);
        yp.push_back(yp.back() * Y);
    }
    BivariatePolynomial out(degree_);
    for (int i = 0; i <= degree_; ++i) {
        for (int j = 0; i + j <= degree_; ++j) {
            const double c = c_[index(i, j)];
            if (c == 0.0) {
                continue;
            }
            BivariatePolynomial term = xp[static_cast<std::size_t>(i)] * yp[static_cast<std::size_t>(j)];
            term *= c;
            out += term;
        }
    }
    return out;
}

BivariatePolynomial BivariatePolynomial::with_degree(int degree) const {
    BivariatePolynomial out(degree);
    const int n = std::min(degree, degree_);
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; i + j <= n; ++j) {
            out.c_[index(i, j)] = c_[index(i, j)];
        }
    }
    return out;
}

double BivariatePolynomial::max_abs_coefficient() const {
    double m = 0.0;
    for (double c : c_) {
        m = std::max(m, std::abs(c));
    }
    return m;
}

BivariatePolynomial& BivariatePolynomial::operator+=(const BivariatePolynomial& o) {
    if (o.degree_ > degree_) {
        *this = with_degree(o.degree_);
    }
    for (std::size_t n = 0; n < o.c_.size(); ++n) {
        c_[n] += o.c_[n];
    }
    return *this;
}

BivariatePolynomial& BivariatePolynomial::operator-=(const BivariatePolynomial& o) {
    if (o.degree_ > degree_) {
        *this = with_degree(o.degree_);
    }
    for (std::size_t n = 0; n < o.c_.size(); ++n) {
        c_[n] -= o.c_[n];
    }
    return *this;
}

BivariatePolynomial& BivariatePolynomial::operator*=(double s) {
    for (double& c : c_) {
        c *= s;
    }
    return *this;
}

BivariatePolynomial operator*(const BivariatePolynomial& a, const BivariatePolynomial& b) {
    BivariatePolynomial out(a.degree_ + b.degree_);
    for (int i1 = 0; i1 <= a.degree_; ++i1) {
        for (int j1 = 0; i1 + j1 <= a.degree_; ++j1) {
            const double ca = a.c_[BivariatePolynomial::index(i1, j1)];
            if (ca == 0.0) {
                continue;
            }
            for (int i2 = 0; i2 <= b.degree_; ++i2) {
                for (int j2 = 0; i2 + j2 <= b.degree_; ++j2) {
                    out.c_[BivariatePolynomial::index(i1 + i2, j1 + j2)] +=
                        ca * b.c_[BivariatePolynomial::index(i2, j2)];
                }
            }
        }
    }
    return out;
}

double coefficient_distance(const BivariatePolynomial& a, const BivariatePolynomial& b) {
    const int d = std::max(a.degree(), b.degree());
    return (a.with_degree(d) - b.with_degree(d)).max_abs_coefficient();
}

} // namespace cirest
