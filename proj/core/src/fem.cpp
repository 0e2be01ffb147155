#include "cirest/fem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>

#include "cirest/csv.hpp"
#include "cirest/error.hpp"
#include "cirest/parallel.hpp"
#include "cirest/quadrature.hpp"

namespace cirest {

PoissonProblem cylinder_problem(double a) {
    if (!(a > 1.0)) throw InvalidArgument("cylinder_problem: need a > 1");
    const double a2 = a * a;
    PoissonProblem p;
    p.name = "cylinder";
    p.u = [a2](Point q) { return std::sqrt(a2 - q.x * q.x); };
    p.g = p.u;
    p.f = [a2](Point q) {
        const double s = a2 - q.x * q.x;
        return a2 / (s * std::sqrt(s));
    };
    p.grad_u = [a2](Point q) { return Point{-q.x / std::sqrt(a2 - q.x * q.x), 0.0}; };
    return p;
}

PoissonProblem linear_problem(double c0, double cx, double cy) {
    PoissonProblem p;
    p.name = "linear";
    p.u = [=](Point q) { return c0 + cx * q.x + cy * q.y; };
    p.g = p.u;
    p.f = [](Point) { return 0.0; };
    p.grad_u = [=](Point) { return Point{cx, cy}; };
    return p;
}

std::shared_ptr<const FemSpace> make_space(const TriMesh& mesh, int order) {
    if (order != 1 && order != 2) throw InvalidArgument("make_space: order must be 1 or 2");
    auto space = std::make_shared<FemSpace>();
    space->mesh = &mesh;
    space->order = order;
    space->nodes = mesh.vertices;
    space->boundary = mesh.boundary;
    space->element_dofs.resize(mesh.triangles.size());
    for (std::size_t e = 0; e < mesh.triangles.size(); ++e) {
        auto& d = space->element_dofs[e];
        d.fill(-1);
        for (std::size_t l = 0; l < 3; ++l) d[l] = mesh.triangles[e][l];
    }
    if (order == 2) {
        const EdgeTable edges = build_edges(mesh);
        const int nv = static_cast<int>(mesh.vertices.size());
        for (std::size_t i = 0; i < edges.edges.size(); ++i) {
            const auto [a, b] = edges.edges[i];
            space->nodes.push_back(0.5 * (mesh.vertices[static_cast<std::size_t>(a)] +
                                          mesh.vertices[static_cast<std::size_t>(b)]));
            space->boundary.push_back(edges.multiplicity[i] == 1);
        }
        for (std::size_t e = 0; e < mesh.triangles.size(); ++e)
            for (std::size_t l = 0; l < 3; ++l) space->element_dofs[e][3 + l] = nv + edges.triangle_edges[e][l];
    }
    return space;
}

namespace {

std::array<Point, 3> barycentric_gradients(const std::array<Point, 3>& p, double& area) {
    const double twice = cross(p[1] - p[0], p[2] - p[0]);
    area = 0.5 * twice;
    return {Point{(p[1].y - p[2].y) / twice, (p[2].x - p[1].x) / twice},
            Point{(p[2].y - p[0].y) / twice, (p[0].x - p[2].x) / twice},
            Point{(p[0].y - p[1].y) / twice, (p[1].x - p[0].x) / twice}};
}

std::array<Point, 6> gradients_from(const std::array<Point, 3>& gl, int order, const std::array<double, 3>& l) {
    std::array<Point, 6> g{};
    if (order == 1) {
        for (std::size_t i = 0; i < 3; ++i) g[i] = gl[i];
        return g;
    }
    for (std::size_t i = 0; i < 3; ++i) {
        g[i] = (4.0 * l[i] - 1.0) * gl[i];
        const std::size_t a = (i + 1) % 3;
        const std::size_t b = (i + 2) % 3;
        g[3 + i] = 4.0 * (l[a] * gl[b] + l[b] * gl[a]);
    }
    return g;
}

std::array<Point, 3> element_points(const FemSpace& space, std::size_t e) {
    const auto& t = space.mesh->triangles[e];
    return {space.mesh->vertices[static_cast<std::size_t>(t[0])], space.mesh->vertices[static_cast<std::size_t>(t[1])],
            space.mesh->vertices[static_cast<std::size_t>(t[2])]};
}

Point at(const std::array<Point, 3>& p, const std::array<double, 3>& l) {
    return {l[0] * p[0].x + l[1] * p[1].x + l[2] * p[2].x, l[0] * p[0].y + l[1] * p[1].y + l[2] * p[2].y};
}

constexpr std::size_t kChunks = 64;

/// Sum of term(e) over all elements, in a fixed chunking so the result does not depend on the
/// thread count.
template <class F>
double element_sum(std::size_t count, F&& term) {
    const std::size_t chunks = std::min(kChunks, std::max<std::size_t>(count, 1));
    std::vector<double> partial(chunks, 0.0);
    parallel_for(chunks, [&](std::size_t c) {
        double s = 0.0;
        for (std::size_t e = c * count / chunks; e < (c + 1) * count / chunks; ++e) s += term(e);
        partial[c] = s;
    });
    return std::accumulate(partial.begin(), partial.end(), 0.0);
}

template <class F>
void for_chunks(std::size_t count, F&& body) {
    const std::size_t chunks = std::min(kChunks, std::max<std::size_t>(count, 1));
    parallel_for(chunks, [&](std::size_t c) { body(c * count / chunks, (c + 1) * count / chunks); });
}

constexpr int kErrorDegree = 8;

} // namespace

std::array<Point, 6> local_gradients(const std::array<Point, 3>& p, int order, const std::array<double, 3>& l) {
    double area = 0.0;
    return gradients_from(barycentric_gradients(p, area), order, l);
}

std::array<double, 6> local_values(int order, const std::array<double, 3>& l) {
    std::array<double, 6> v{};
    if (order == 1) {
        for (std::size_t i = 0; i < 3; ++i) v[i] = l[i];
        return v;
    }
    for (std::size_t i = 0; i < 3; ++i) {
        v[i] = l[i] * (2.0 * l[i] - 1.0);
        v[3 + i] = 4.0 * l[(i + 1) % 3] * l[(i + 2) % 3];
    }
    return v;
}

double CsrMatrix::entry(std::size_t i, int j) const {
    const auto first = cols.begin() + static_cast<std::ptrdiff_t>(row_ptr[i]);
    const auto last = cols.begin() + static_cast<std::ptrdiff_t>(row_ptr[i + 1]);
    const auto it = std::lower_bound(first, last, j);
    return (it != last && *it == j) ? values[static_cast<std::size_t>(it - cols.begin())] : 0.0;
}

std::vector<double> CsrMatrix::multiply(const std::vector<double>& x) const {
    std::vector<double> y(rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
        double s = 0.0;
        for (std::size_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) s += values[p] * x[static_cast<std::size_t>(cols[p])];
        y[i] = s;
    }
    return y;
}

SparseSystem assemble(const TriMesh& mesh, int order, const PoissonProblem& problem) {
    SparseSystem sys;
    sys.space = make_space(mesh, order);
    const FemSpace& space = *sys.space;
    const std::size_t n = space.size();
    const std::size_t ne = mesh.triangles.size();
    const auto ls = static_cast<std::size_t>(space.local_size());

    // Node -> (element, local index), elements ascending.
    std::vector<std::size_t> inc_ptr(n + 1, 0);
    for (const auto& d : space.element_dofs)
        for (std::size_t a = 0; a < ls; ++a) ++inc_ptr[static_cast<std::size_t>(d[a]) + 1];
    std::partial_sum(inc_ptr.begin(), inc_ptr.end(), inc_ptr.begin());
    std::vector<std::uint64_t> inc(inc_ptr[n]);
    {
        std::vector<std::size_t> fill(inc_ptr.begin(), inc_ptr.end() - 1);
        for (std::size_t e = 0; e < ne; ++e)
            for (std::size_t a = 0; a < ls; ++a)
                inc[fill[static_cast<std::size_t>(space.element_dofs[e][a])]++] = 8 * e + a;
    }

    auto row_pattern = [&](std::size_t r, std::vector<int>& cols) {
        cols.clear();
        for (std::size_t p = inc_ptr[r]; p < inc_ptr[r + 1]; ++p) {
            const auto& d = space.element_dofs[inc[p] / 8];
            cols.insert(cols.end(), d.begin(), d.begin() + static_cast<std::ptrdiff_t>(ls));
        }
        std::sort(cols.begin(), cols.end());
        cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    };

    CsrMatrix& m = sys.matrix;
    m.rows = n;
    m.row_ptr.assign(n + 1, 0);
    for_chunks(n, [&](std::size_t lo, std::size_t hi) {
        std::vector<int> cols;
        for (std::size_t r = lo; r < hi; ++r) {
            row_pattern(r, cols);
            m.row_ptr[r + 1] = cols.size();
        }
    });
    std::partial_sum(m.row_ptr.begin(), m.row_ptr.end(), m.row_ptr.begin());
    m.cols.resize(m.row_ptr[n]);
    m.values.assign(m.row_ptr[n], 0.0);

    // Element load vectors, computed once.
    const QuadratureRule& load_rule = rule_for_degree(2 * order + 4);
    std::vector<double> load(ne * ls, 0.0);
    for_chunks(ne, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t e = lo; e < hi; ++e) {
            const auto p = element_points(space, e);
            const double area = 0.5 * cross(p[1] - p[0], p[2] - p[0]);
            for (std::size_t q = 0; q < load_rule.size(); ++q) {
                const auto& l = load_rule.barycentric[q];
                const double fw = load_rule.weights[q] * problem.f(at(p, l)) * area;
                const auto phi = local_values(order, l);
                for (std::size_t a = 0; a < ls; ++a) load[e * ls + a] += fw * phi[a];
            }
        }
    });

    const QuadratureRule& stiff_rule = rule_for_degree(std::max(1, 2 * (order - 1)));
    sys.rhs.assign(n, 0.0);
    for_chunks(n, [&](std::size_t lo, std::size_t hi) {
        std::vector<int> cols;
        std::vector<std::array<Point, 6>> grads(stiff_rule.size());
        for (std::size_t r = lo; r < hi; ++r) {
            row_pattern(r, cols);
            std::copy(cols.begin(), cols.end(), m.cols.begin() + static_cast<std::ptrdiff_t>(m.row_ptr[r]));
            for (std::size_t p = inc_ptr[r]; p < inc_ptr[r + 1]; ++p) {
                const std::size_t e = inc[p] / 8;
                const std::size_t a = inc[p] % 8;
                const auto pts = element_points(space, e);
                double area = 0.0;
                const auto gl = barycentric_gradients(pts, area);
                for (std::size_t q = 0; q < stiff_rule.size(); ++q)
                    grads[q] = gradients_from(gl, order, stiff_rule.barycentric[q]);
                for (std::size_t b = 0; b < ls; ++b) {
                    double k = 0.0;
                    for (std::size_t q = 0; q < stiff_rule.size(); ++q)
                        k += stiff_rule.weights[q] * dot(grads[q][a], grads[q][b]);
                    const int col = space.element_dofs[e][b];
                    const auto it = std::lower_bound(cols.begin(), cols.end(), col);
                    m.values[m.row_ptr[r] + static_cast<std::size_t>(it - cols.begin())] += area * k;
                }
                sys.rhs[r] += load[e * ls + a];
            }
        }
    });

    sys.constrained = space.boundary;
    sys.prescribed.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        if (sys.constrained[i]) sys.prescribed[i] = problem.g(space.nodes[i]);
    return sys;
}

FemSolution solve_system(const SparseSystem& system, double tol) {
    const CsrMatrix& m = system.matrix;
    const std::size_t n = m.rows;
    std::vector<int> compact(n, -1);
    int nf = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (!system.constrained[i]) compact[i] = nf++;

    using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
    SpMat a(nf, nf);
    Eigen::VectorXi row_sizes(nf);
    for (std::size_t i = 0; i < n; ++i) {
        if (compact[i] < 0) continue;
        int count = 0;
        for (std::size_t p = m.row_ptr[i]; p < m.row_ptr[i + 1]; ++p)
            count += compact[static_cast<std::size_t>(m.cols[p])] >= 0 ? 1 : 0;
        row_sizes(compact[i]) = count;
    }
    a.reserve(row_sizes);
    Eigen::VectorXd b(nf);
    for (std::size_t i = 0; i < n; ++i) {
        const int r = compact[i];
        if (r < 0) continue;
        double rhs = system.rhs[i];
        for (std::size_t p = m.row_ptr[i]; p < m.row_ptr[i + 1]; ++p) {
            const auto j = static_cast<std::size_t>(m.cols[p]);
            if (compact[j] >= 0) {
                a.insert(r, compact[j]) = m.values[p];
            } else {
                rhs -= m.values[p] * system.prescribed[j];
            }
        }
        b(r) = rhs;
    }
    a.makeCompressed();

    FemSolution sol;
    sol.space = system.space;
    sol.coefficients = system.prescribed;
    if (nf == 0) return sol;

    Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
    cg.setTolerance(tol);
    cg.setMaxIterations(10 * nf);
    cg.compute(a);
    const Eigen::VectorXd x = cg.solve(b);
    sol.iterations = static_cast<int>(cg.iterations());
    sol.residual = cg.error();
    sol.converged = cg.info() == Eigen::Success;
    for (std::size_t i = 0; i < n; ++i)
        if (compact[i] >= 0) sol.coefficients[i] = x(compact[i]);
    return sol;
}

FemSolution solve(const SparseSystem& system, double tol) {
    FemSolution sol = solve_system(system, tol);
    if (!sol.converged) {
        throw ConvergenceFailure("CG did not reach relative residual " + csv_number(tol) + " within " +
                                     std::to_string(sol.iterations) + " iterations",
                                 sol.iterations, sol.residual);
    }
    return sol;
}

FemSolution interpolate(std::shared_ptr<const FemSpace> space, const std::function<double(Point)>& fn) {
    FemSolution sol;
    sol.coefficients.resize(space->size());
    for (std::size_t i = 0; i < space->size(); ++i) sol.coefficients[i] = fn(space->nodes[i]);
    sol.space = std::move(space);
    return sol;
}

namespace {

/// Sum over elements of the degree 8 quadrature of integrand(e, x, basis gradients, local size).
template <class F>
double gradient_integral(const FemSpace& space, F&& integrand) {
    const QuadratureRule& rule = rule_for_degree(kErrorDegree);
    const auto ls = static_cast<std::size_t>(space.local_size());
    return element_sum(space.mesh->triangles.size(), [&](std::size_t e) {
        const auto pts = element_points(space, e);
        double area = 0.0;
        const auto gl = barycentric_gradients(pts, area);
        double s = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto& l = rule.barycentric[q];
            const auto g = gradients_from(gl, space.order, l);
            s += rule.weights[q] * integrand(e, at(pts, l), g, ls);
        }
        return s * area;
    });
}

Point combine(const FemSpace& space, const std::vector<double>& c, std::size_t e, const std::array<Point, 6>& g,
              std::size_t ls) {
    Point s{0.0, 0.0};
    for (std::size_t a = 0; a < ls; ++a) s = s + c[static_cast<std::size_t>(space.element_dofs[e][a])] * g[a];
    return s;
}

} // namespace

double h1_error(const FemSolution& sol, const PoissonProblem& problem) {
    const FemSpace& space = *sol.space;
    const double sq = gradient_integral(space, [&](std::size_t e, Point x, const std::array<Point, 6>& g,
                                                   std::size_t ls) {
        const Point d = problem.grad_u(x) - combine(space, sol.coefficients, e, g, ls);
        return dot(d, d);
    });
    return std::sqrt(sq);
}

double galerkin_residual(const FemSolution& sol, const PoissonProblem& problem, const std::vector<double>& v) {
    const FemSpace& space = *sol.space;
    return gradient_integral(space, [&](std::size_t e, Point x, const std::array<Point, 6>& g, std::size_t ls) {
        const Point d = problem.grad_u(x) - combine(space, sol.coefficients, e, g, ls);
        return dot(d, combine(space, v, e, g, ls));
    });
}

double h1_seminorm(const FemSpace& space, const std::vector<double>& v) {
    const double sq = gradient_integral(space, [&](std::size_t e, Point, const std::array<Point, 6>& g,
                                                   std::size_t ls) {
        const Point d = combine(space, v, e, g, ls);
        return dot(d, d);
    });
    return std::sqrt(sq);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = std::min(x.size(), y.size());
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

std::vector<StudyRow> ConvergenceStudy::rows_for(double alpha) const {
    std::vector<StudyRow> out;
    for (const auto& r : rows)
        if (r.alpha == alpha) out.push_back(r);
    return out;
}

double ConvergenceStudy::slope_vs_h(double alpha) const {
    std::vector<double> x, y;
    for (const auto& r : rows_for(alpha))
        if (r.converged) {
            x.push_back(r.max_h);
            y.push_back(r.error);
        }
    return loglog_slope(x, y);
}

double ConvergenceStudy::slope_vs_r(double alpha) const {
    std::vector<double> x, y;
    for (const auto& r : rows_for(alpha))
        if (r.converged) {
            x.push_back(r.max_r_h);
            y.push_back(r.error);
        }
    return loglog_slope(x, y);
}

ConvergenceStudy convergence_study(int order, const std::vector<double>& alphas, const std::vector<int>& ns,
                                   double tol, MeshPattern pattern) {
    ConvergenceStudy study;
    study.order = order;
    study.rows.resize(alphas.size() * ns.size());
    const PoissonProblem problem = cylinder_problem();
    parallel_for(study.rows.size(), [&](std::size_t i) {
        StudyRow& row = study.rows[i];
        row.alpha = alphas[i / ns.size()];
        row.n = ns[i % ns.size()];
        const TriMesh mesh = build_aniso_mesh(row.n, row.alpha, pattern);
        const MeshStats stats = mesh_stats(mesh);
        row.max_h = stats.max_diameter;
        row.max_r = stats.max_circumradius;
        row.max_r_h = order == 1 ? stats.max_circumradius : stats.max_r_times_h;
        const SparseSystem sys = assemble(mesh, order, problem);
        const FemSolution sol = solve_system(sys, tol);
        row.dofs = sys.space->size();
        row.iterations = sol.iterations;
        row.converged = sol.converged;
        row.error = h1_error(sol, problem);
    });
    return study;
}

void write_study_csv(const ConvergenceStudy& study, std::ostream& out) {
    out << "alpha,N,max_h,max_R,max_R_h_km1,h1_error,cg_iterations,converged\n";
    for (const auto& r : study.rows) {
        out << csv_number(r.alpha) << ',' << r.n << ',' << csv_number(r.max_h) << ',' << csv_number(r.max_r) << ','
            << csv_number(r.max_r_h) << ',' << csv_number(r.error) << ',' << r.iterations << ','
            << (r.converged ? 1 : 0) << '\n';
    }
}

} // namespace cirest
