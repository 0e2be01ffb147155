#ifndef CIREST_FEM_HPP
#define CIREST_FEM_HPP

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "cirest/geometry.hpp"
#include "cirest/mesh.hpp"

namespace cirest {

/// -Laplace u = f in (-1,1)^2, u = g on the boundary, with closed-form exact solution.
struct PoissonProblem {
    std::string name;
    std::function<double(Point)> f;
    std::function<double(Point)> g;
    std::function<double(Point)> u;
    std::function<Point(Point)> grad_u;
};

/// u = g = sqrt(a^2 - x^2), f = a^2 / (a^2 - x^2)^(3/2). Requires a > 1.
PoissonProblem cylinder_problem(double a = 1.1);

/// u = g = c0 + cx x + cy y, f = 0.
PoissonProblem linear_problem(double c0, double cx, double cy);

/// Continuous Lagrange space of order 1 or 2. Nodes are the mesh vertices followed (order 2) by
/// the edge midpoints. Holds a pointer to the mesh, which must outlive it.
struct FemSpace {
    const TriMesh* mesh = nullptr;
    int order = 1;
    std::vector<Point> nodes;
    std::vector<bool> boundary;
    /// Local dofs: vertices 0..2, then (order 2) the midpoint of the edge opposite vertex l at 3 + l.
    std::vector<std::array<int, 6>> element_dofs;

    int local_size() const { return order == 1 ? 3 : 6; }
    std::size_t size() const { return nodes.size(); }
};

/// Throws InvalidArgument for order outside {1, 2}.
std::shared_ptr<const FemSpace> make_space(const TriMesh& mesh, int order);

/// Gradients of the local basis at barycentric point l, for the triangle with vertices p.
std::array<Point, 6> local_gradients(const std::array<Point, 3>& p, int order, const std::array<double, 3>& l);
std::array<double, 6> local_values(int order, const std::array<double, 3>& l);

struct CsrMatrix {
    std::size_t rows = 0;
    std::vector<std::size_t> row_ptr;
    std::vector<int> cols; // sorted within each row
    std::vector<double> values;

    std::size_t nnz() const { return values.size(); }
    /// 0 when (i, j) is outside the pattern.
    double entry(std::size_t i, int j) const;
    std::vector<double> multiply(const std::vector<double>& x) const;
};

struct SparseSystem {
    std::shared_ptr<const FemSpace> space;
    CsrMatrix matrix;           // full stiffness, constrained rows included
    std::vector<double> rhs;    // load vector
    std::vector<bool> constrained;
    std::vector<double> prescribed; // g at constrained nodes, 0 elsewhere
};

/// Stiffness from exact gradients (degree 2 rule, exact for order <= 2); load by the degree 2k + 4
/// rule. Each row is summed over its incident elements in ascending order, so a_ij == a_ji exactly.
SparseSystem assemble(const TriMesh& mesh, int order, const PoissonProblem& problem);

struct FemSolution {
    std::shared_ptr<const FemSpace> space;
    std::vector<double> coefficients;
    int iterations = 0;
    double residual = 0.0; // final relative residual of the reduced system
    bool converged = true;
};

/// Eliminates the constrained nodes and runs Jacobi-preconditioned CG from zero to relative
/// residual <= tol with at most 10 n iterations. The returned flag reports convergence.
FemSolution solve_system(const SparseSystem& system, double tol = 1e-10);

/// solve_system that throws ConvergenceFailure when the iteration cap is hit.
FemSolution solve(const SparseSystem& system, double tol = 1e-10);

/// Nodal interpolant of fn.
FemSolution interpolate(std::shared_ptr<const FemSpace> space, const std::function<double(Point)>& fn);

/// |u - u_h|_{1,2} with a degree 8 rule per element.
double h1_error(const FemSolution& sol, const PoissonProblem& problem);

/// (grad(u - u_h), grad v_h) with a degree 8 rule, v_h given by its nodal coefficients.
double galerkin_residual(const FemSolution& sol, const PoissonProblem& problem, const std::vector<double>& v);

/// |v_h|_{1,2}.
double h1_seminorm(const FemSpace& space, const std::vector<double>& v);

struct StudyRow {
    double alpha = 0.0;
    int n = 0;
    std::size_t dofs = 0;
    double max_h = 0.0;
    double max_r = 0.0;
    double max_r_h = 0.0; // max R_K h_K^(k-1)
    double error = 0.0;
    int iterations = 0;
    bool converged = true;
};

struct ConvergenceStudy {
    int order = 1;
    std::vector<StudyRow> rows;

    std::vector<StudyRow> rows_for(double alpha) const;
    /// Least-squares slope of log error against log max_h (resp. log max_r_h) over the
    /// converged rows of alpha; NaN with fewer than two rows.
    double slope_vs_h(double alpha) const;
    double slope_vs_r(double alpha) const;
};

/// One solve per (alpha, N), in parallel over the grid; rows ordered alpha-major.
ConvergenceStudy convergence_study(int order, const std::vector<double>& alphas, const std::vector<int>& ns,
                                   double tol = 1e-10, MeshPattern pattern = MeshPattern::shifted_rows);

/// Header plus one row per study row.
void write_study_csv(const ConvergenceStudy& study, std::ostream& out);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace cirest

#endif // CIREST_FEM_HPP
