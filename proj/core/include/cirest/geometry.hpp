#ifndef CIREST_GEOMETRY_HPP
#define CIREST_GEOMETRY_HPP

#include <array>
#include <cmath>

namespace cirest {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(Point a, Point b) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(b - a); }

/// Row-major 2x2 matrix.
struct Mat2 {
    double a11 = 1.0, a12 = 0.0;
    double a21 = 0.0, a22 = 1.0;

    double det() const { return a11 * a22 - a12 * a21; }
    Mat2 transpose() const { return {a11, a21, a12, a22}; }
    Mat2 inverse() const;
    Point operator*(Point p) const { return {a11 * p.x + a12 * p.y, a21 * p.x + a22 * p.y}; }
    Mat2 operator*(const Mat2& o) const;
    static Mat2 diag(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }
    static Mat2 rotation(double angle);
};

/// Singular values (largest first) from the closed form for 2x2 matrices.
std::array<double, 2> singular_values(const Mat2& m);
/// Spectral norm, i.e. the largest singular value.
double spectral_norm(const Mat2& m);

/// x -> linear * x + offset.
struct AffineMap {
    Mat2 linear;
    Point offset;

    Point operator()(Point p) const { return linear * p + offset; }
    AffineMap inverse() const;
};

/// A non-degenerate triangle with counter-clockwise vertex order.
///
/// Construction rejects vertex triples with |signed area| <= 1e-14 h^2.
/// Clockwise input is reordered by swapping the last two vertices.
class Triangle {
public:
    Triangle(Point a, Point b, Point c);

    const Point& vertex(int i) const { return v_[static_cast<std::size_t>(i)]; }
    const std::array<Point, 3>& vertices() const { return v_; }

    /// Positive area.
    double area() const { return area_; }

    /// Affine map of the reference triangle (0,0),(1,0),(0,1) onto this one,
    /// sending reference vertex i to vertex(i).
    AffineMap reference_map() const;

    /// Point with barycentric coordinates (l0, l1, l2).
    Point from_barycentric(double l0, double l1, double l2) const;

private:
    std::array<Point, 3> v_;
    double area_;
};

/// Area from three side lengths by Kahan's cancellation-free arrangement of Heron's formula.
double kahan_area(double a, double b, double c);

struct TriangleMetrics {
    /// edge[i] is the length of the side opposite vertex i.
    std::array<double, 3> edge{};
    double area = 0.0;
    double diameter = 0.0;     // h_K
    double inradius = 0.0;     // rho_K = 2S / perimeter
    double circumradius = 0.0; // R_K = ABC / (4S)
    std::array<double, 3> angle{};
    double chunkiness = 0.0;     // h_K / rho_K
    double semiregularity = 0.0; // R_K / h_K

    double max_angle() const;
    double min_angle() const;
};

TriangleMetrics triangle_metrics(const Triangle& tri);

/// Closed-form constant C(K) bounding the P1 interpolation error |v - Iv|_1 <= C(K) |v|_2.
/// Throws NumericalInconsistency if the radicand is not positive.
double kobayashi_constant(const Triangle& tri);

/// Orthogonal map p -> rotation * (p - origin); rotation has determinant -1 when reflected.
struct RigidMotion {
    Mat2 rotation;
    Point origin;
    bool reflected = false;

    Point operator()(Point p) const { return rotation * (p - origin); }
};

/// Normal form with vertices (0,0), (alpha,0), (beta*s, beta*t) and the maximum
/// angle theta at the origin.
struct StandardPosition {
    double alpha = 0.0;
    double beta = 0.0;
    double s = 0.0; // cos(theta)
    double t = 0.0; // sin(theta)
    double diameter = 0.0;
    int origin_vertex = 0; // input vertex placed at (0,0)
    int alpha_vertex = 0;  // input vertex placed at (alpha,0)
    int beta_vertex = 0;   // input vertex placed at (beta*s, beta*t)
    RigidMotion motion;

    double theta() const { return std::atan2(t, s); }
    std::array<Point, 3> canonical_vertices() const;
    Triangle canonical_triangle() const;
};

StandardPosition standard_position(const Triangle& tri);

/// A = shear * diag with shear = [[1, s], [0, t]] and diag = diag(alpha, beta).
struct DecomposedMap {
    Mat2 full;
    Mat2 shear;
    Mat2 diag;
    double shear_norm = 0.0;         // (1 + |s|)^{1/2}
    double shear_inverse_norm = 0.0; // (1 - |s|)^{-1/2}
    double shear_det = 0.0;          // t
};

DecomposedMap decompose(const StandardPosition& sp);

} // namespace cirest

#endif // CIREST_GEOMETRY_HPP
