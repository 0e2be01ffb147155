#include "cirest/geometry.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "cirest/error.hpp"

namespace cirest {

Mat2 Mat2::inverse() const {
    const double d = det();
    if (d == 0.0) {
        throw InvalidArgument("Mat2::inverse: singular matrix");
    }
    return {a22 / d, -a12 / d, -a21 / d, a11 / d};
}

Mat2 Mat2::operator*(const Mat2& o) const {
    return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
            a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
}

Mat2 Mat2::rotation(double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c, -s, s, c};
}

std::array<double, 2> singular_values(const Mat2& m) {
    // Blinn's decomposition into a rotation-like and a reflection-like part.
    const double e = 0.5 * (m.a11 + m.a22);
    const double f = 0.5 * (m.a11 - m.a22);
    const double g = 0.5 * (m.a21 + m.a12);
    const double h = 0.5 * (m.a21 - m.a12);
    const double q = std::hypot(e, h);
    const double r = std::hypot(f, g);
    return {q + r, std::abs(q - r)};
}

double spectral_norm(const Mat2& m) { return singular_values(m)[0]; }

AffineMap AffineMap::inverse() const {
    const Mat2 inv = linear.inverse();
    return {inv, -1.0 * (inv * offset)};
}

Triangle::Triangle(Point a, Point b, Point c) : v_{a, b, c}, area_(0.0) {
    const double l0 = distance(b, c);
    const double l1 = distance(c, a);
    const double l2 = distance(a, b);
    const double h = std::max({l0, l1, l2});
    const double twice_signed = cross(b - a, c - a);
    if (!(std::abs(0.5 * twice_signed) > 1e-14 * h * h) || !std::isfinite(twice_signed)) {
        std::ostringstream os;
        os << "degenerate triangle (" << a.x << "," << a.y << ") (" << b.x << "," << b.y
           << ") (" << c.x << "," << c.y << ")";
        throw DegenerateTriangle(os.str());
    }
    if (twice_signed < 0.0) {
        std::swap(v_[1], v_[2]);
    }
    // The cross product taken at the vertex opposite the longest side involves the
    // two shortest edge vectors, which minimises cancellation.
    const std::array<double, 3> len{distance(v_[1], v_[2]), distance(v_[2], v_[0]),
                                    distance(v_[0], v_[1])};
    const auto o = static_cast<std::size_t>(std::max_element(len.begin(), len.end()) - len.begin());
    const Point& p = v_[o];
    const Point& q = v_[(o + 1) % 3];
    const Point& r = v_[(o + 2) % 3];
    area_ = 0.5 * cross(q - p, r - p);
}

AffineMap Triangle::reference_map() const {
    const Point e1 = v_[1] - v_[0];
    const Point e2 = v_[2] - v_[0];
    return {{e1.x, e2.x, e1.y, e2.y}, v_[0]};
}

Point Triangle::from_barycentric(double l0, double l1, double l2) const {
    return {l0 * v_[0].x + l1 * v_[1].x + l2 * v_[2].x,
            l0 * v_[0].y + l1 * v_[1].y + l2 * v_[2].y};
}

double kahan_area(double a, double b, double c) {
    std::array<double, 3> s{a, b, c};
    std::sort(s.begin(), s.end(), std::greater<>());
    const double x = s[0], y = s[1], z = s[2];
    const double prod = (x + (y + z)) * (z - (x - y)) * (z + (x - y)) * (x + (y - z));
    return 0.25 * std::sqrt(std::max(prod, 0.0));
}

double TriangleMetrics::max_angle() const { return *std::max_element(angle.begin(), angle.end()); }
double TriangleMetrics::min_angle() const { return *std::min_element(angle.begin(), angle.end()); }

TriangleMetrics triangle_metrics(const Triangle& tri) {
    TriangleMetrics m;
    const auto& v = tri.vertices();
    for (std::size_t i = 0; i < 3; ++i) {
        m.edge[i] = distance(v[(i + 1) % 3], v[(i + 2) % 3]);
    }
    m.area = tri.area();
    m.diameter = *std::max_element(m.edge.begin(), m.edge.end());
    const double perimeter = m.edge[0] + m.edge[1] + m.edge[2];
    m.inradius = 2.0 * m.area / perimeter;
    m.circumradius = m.edge[0] * m.edge[1] * m.edge[2] / (4.0 * m.area);
    for (std::size_t i = 0; i < 3; ++i) {
        const Point e1 = v[(i + 1) % 3] - v[i];
        const Point e2 = v[(i + 2) % 3] - v[i];
        m.angle[i] = std::atan2(2.0 * m.area, dot(e1, e2));
    }
    m.chunkiness = m.diameter / m.inradius;
    m.semiregularity = m.circumradius / m.diameter;
    return m;
}

double kobayashi_constant(const Triangle& tri) {
    const TriangleMetrics m = triangle_metrics(tri);
    const double a2 = m.edge[0] * m.edge[0];
    const double b2 = m.edge[1] * m.edge[1];
    const double c2 = m.edge[2] * m.edge[2];
    const double s2 = m.area * m.area;
    const double r = m.circumradius;
    const double radicand = r * r - (a2 + b2 + c2) / 30.0 - (s2 / 5.0) * (1.0 / a2 + 1.0 / b2 + 1.0 / c2);
    if (!(radicand > 0.0)) {
        throw NumericalInconsistency("kobayashi_constant: non-positive radicand");
    }
    return std::sqrt(radicand);
}

std::array<Point, 3> StandardPosition::canonical_vertices() const {
    return {Point{0.0, 0.0}, Point{alpha, 0.0}, Point{beta * s, beta * t}};
}

Triangle StandardPosition::canonical_triangle() const {
    const auto c = canonical_vertices();
    return Triangle(c[0], c[1], c[2]);
}

StandardPosition standard_position(const Triangle& tri) {
    const TriangleMetrics m = triangle_metrics(tri);
    int o = 0;
    for (int i = 1; i < 3; ++i) {
        if (m.edge[static_cast<std::size_t>(i)] > m.edge[static_cast<std::size_t>(o)]) {
            o = i;
        }
    }
    int j = (o + 1) % 3;
    int l = (o + 2) % 3;
    if (j > l) {
        std::swap(j, l);
    }
    // |v_o v_j| is the side opposite l and vice versa.
    const double len_j = m.edge[static_cast<std::size_t>(l)];
    const double len_l = m.edge[static_cast<std::size_t>(j)];
    const int a = (len_l > len_j) ? l : j;
    const int b = (a == j) ? l : j;

    const Point origin = tri.vertex(o);
    const Point da = tri.vertex(a) - origin;
    const Point db = tri.vertex(b) - origin;
    const double alpha = norm(da);
    const double beta = norm(db);
    const Point e1 = (1.0 / alpha) * da;
    const double x3 = dot(db, e1);
    const double y3 = cross(e1, db);

    StandardPosition sp;
    sp.alpha = alpha;
    sp.beta = beta;
    sp.s = x3 / beta;
    sp.t = std::abs(y3) / beta;
    sp.diameter = m.diameter;
    sp.origin_vertex = o;
    sp.alpha_vertex = a;
    sp.beta_vertex = b;
    sp.motion.origin = origin;
    sp.motion.reflected = y3 < 0.0;
    sp.motion.rotation = sp.motion.reflected ? Mat2{e1.x, e1.y, e1.y, -e1.x}
                                             : Mat2{e1.x, e1.y, -e1.y, e1.x};
    return sp;
}

DecomposedMap decompose(const StandardPosition& sp) {
    DecomposedMap d;
    d.full = {sp.alpha, sp.beta * sp.s, 0.0, sp.beta * sp.t};
    d.shear = {1.0, sp.s, 0.0, sp.t};
    d.diag = Mat2::diag(sp.alpha, sp.beta);
    const double as = std::abs(sp.s);
    d.shear_norm = std::sqrt(1.0 + as);
    d.shear_inverse_norm = 1.0 / std::sqrt(1.0 - as);
    d.shear_det = sp.t;
    return d;
}

} // namespace cirest
