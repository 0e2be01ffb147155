#include "cirest/verify.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "cirest/constants.hpp"
#include "cirest/csv.hpp"
#include "cirest/diffquot.hpp"
#include "cirest/fem.hpp"
#include "cirest/geometry.hpp"
#include "cirest/lagrange.hpp"
#include "cirest/mesh.hpp"
#include "cirest/parallel.hpp"
#include "cirest/quadrature.hpp"

namespace cirest {
namespace {

class Collector {
public:
    explicit Collector(std::vector<SuiteCheck>& out) : out_(out) {}

    /// Passes when value <= tolerance; NaN fails.
    void at_most(const std::string& module, const std::string& name, double value, double tolerance) {
        out_.push_back({module, name, value, tolerance, value <= tolerance});
    }

private:
    std::vector<SuiteCheck>& out_;
};

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

const Triangle kReference({0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0});

void geometry_checks(Collector& c, std::uint64_t seed) {
    const Triangle equilateral({0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0});
    c.at_most("geometry", "equilateral-circumradius", rel(triangle_metrics(equilateral).circumradius, 1.0 / std::sqrt(3.0)),
              1e-14);
    c.at_most("geometry", "right-isosceles-circumradius",
              rel(triangle_metrics(kReference).circumradius, std::sqrt(0.5)), 1e-14);

    Rng rng(derive_seed(seed, 1));
    double c_over_r = 0.0, euler = 0.0, area = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Triangle t = random_triangle(rng);
        const TriangleMetrics m = triangle_metrics(t);
        c_over_r = std::max(c_over_r, kobayashi_constant(t) / m.circumradius);
        euler = std::max(euler, 2.0 * m.inradius / m.circumradius);
        area = std::max(area, rel(m.area, t.area()));
    }
    c.at_most("geometry", "kobayashi-below-circumradius", c_over_r, 1.0);
    c.at_most("geometry", "euler-inradius-inequality", euler, 1.0 + 1e-12);
    c.at_most("geometry", "kahan-vs-coordinate-area", area, 1e-8);
}

void quadrature_checks(Collector& c) {
    double worst = 0.0;
    for (int q = 1; q <= kMaxQuadratureDegree; ++q)
        for (int i = 0; i <= q; ++i) {
            const double exact = factorial(i) * factorial(q - i) / factorial(q + 2);
            worst = std::max(worst, rel(integrate(BivariatePolynomial::monomial(i, q - i), kReference, q), exact));
        }
    c.at_most("quadrature", "monomial-exactness", worst, 1e-12);
    double weights = 0.0;
    for (int q = 1; q <= kMaxQuadratureDegree; ++q) {
        const QuadratureRule& r = rule_for_degree(q);
        double s = 0.0;
        for (double w : r.weights) {
            s += w;
            if (!(w > 0.0)) weights = std::max(weights, 1.0);
        }
        weights = std::max(weights, std::abs(s - 1.0));
    }
    c.at_most("quadrature", "positive-weights-sum-to-one", weights, 1e-13);
}

void lagrange_checks(Collector& c, std::uint64_t seed) {
    Rng rng(derive_seed(seed, 2));
    double on_stencil = 0.0, reproduce = 0.0;
    for (int k = 1; k <= 5; ++k)
        for (int trial = 0; trial < 20; ++trial) {
            const BivariatePolynomial v = random_polynomial(rng, k + 2);
            const BivariatePolynomial e = reference_residual(v, k);
            double scale = 1.0;
            for (const auto& p : reference_stencil(k).points) scale = std::max(scale, std::abs(v(p.x)));
            for (const auto& p : reference_stencil(k).points)
                on_stencil = std::max(on_stencil, std::abs(e(p.x)) / scale);
            const BivariatePolynomial w = random_polynomial(rng, k);
            const BivariatePolynomial res = reference_residual(w, k);
            for (double coeff : res.coefficients()) reproduce = std::max(reproduce, std::abs(coeff));
        }
    c.at_most("lagrange", "residual-vanishes-on-stencil", on_stencil, 1e-10);
    c.at_most("lagrange", "reproduces-degree-k", reproduce, 1e-10);

    double worst = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const Triangle t = random_triangle(rng);
        const BivariatePolynomial v = random_polynomial(rng, 3);
        const double bound = kobayashi_constant(t) * seminorm(v, {2, 2.0}, t);
        worst = std::max(worst, interp_error(v, 1, 1, 2.0, t) / bound);
    }
    c.at_most("lagrange", "kobayashi-bound-cubics", worst, 1.0 + 1e-8);
}

void constants_checks(Collector& c) {
    c.at_most("constants", "babuska-aziz-A2", std::abs(babuska_aziz_A2() - 0.49291), 1e-5);
    const double r = babuska_aziz_root();
    c.at_most("constants", "root-equation", std::abs(r + std::tan(r)), 1e-12);
    const ConstantEstimate e = estimate_B(1, 1, 2.0, kReference, 6);
    c.at_most("constants", "estimate-below-A2", e.value / babuska_aziz_A2(), 1.0 + 1e-6);
    const SqueezeTable table = squeeze_scaling_check(1, 1, 2.0, {{1.0, 1.0}, {1.0, 0.1}}, 6);
    double over = 0.0;
    for (const auto& row : table.rows) over = std::max(over, row.estimate.value / *row.upper_bound - 1.0);
    c.at_most("constants", "squeeze-below-upper-bound", over, 1e-6);
}

void diffquot_checks(Collector& c, std::uint64_t seed) {
    for (const IdentityCheck& id : identity_suite(seed)) {
        c.at_most("diffquot", id.name, id.residual, id.tolerance);
    }
}

void mesh_checks(Collector& c) {
    for (const MeshPattern pattern : {MeshPattern::shifted_rows, MeshPattern::center_split})
        for (int n : {3, 8})
            for (double alpha : {1.0, 1.6, 2.1}) {
                const TriMesh mesh = build_aniso_mesh(n, alpha, pattern);
                const ConformityReport r = check_conformity(mesh);
                const std::string tag = pattern_name(pattern) + "-N" + std::to_string(n) + "-alpha" +
                                        csv_number(alpha);
                const double defects = static_cast<double>(r.bad_edges + r.bad_triangles + r.bad_boundary_flags);
                c.at_most("mesh", "conformity-" + tag, defects + r.area_error, 1e-10);
                c.at_most("mesh", "max-circumradius-" + tag,
                          rel(mesh_stats(mesh).max_circumradius, nominal_circumradius(n, alpha, pattern)), 1e-12);
            }
}

void fem_checks(Collector& c) {
    const TriMesh mesh = build_aniso_mesh(4, 1.5);
    const PoissonProblem linear = linear_problem(0.5, -1.0, 2.0);
    for (int k : {1, 2}) {
        const FemSolution sol = solve(assemble(mesh, k, linear));
        c.at_most("fem", "linear-patch-k" + std::to_string(k), h1_error(sol, linear), 1e-9);
    }
    const TriMesh fine = build_aniso_mesh(8, 1.4);
    const PoissonProblem cyl = cylinder_problem();
    const SparseSystem sys = assemble(fine, 1, cyl);
    double asym = 0.0;
    for (std::size_t i = 0; i < sys.matrix.rows; ++i)
        for (std::size_t p = sys.matrix.row_ptr[i]; p < sys.matrix.row_ptr[i + 1]; ++p)
            asym = std::max(asym, std::abs(sys.matrix.values[p] -
                                           sys.matrix.entry(static_cast<std::size_t>(sys.matrix.cols[p]),
                                                            static_cast<int>(i))));
    c.at_most("fem", "stiffness-symmetry", asym, 0.0);
    const FemSolution sol = solve(sys);
    const double fem = h1_error(sol, cyl);
    const double best = h1_error(interpolate(sol.space, cyl.u), cyl);
    c.at_most("fem", "energy-optimality", fem / best, 1.0 + 1e-6);
    c.at_most("fem", "cg-residual", sol.residual, 1e-10);
}

} // namespace

std::vector<SuiteCheck> verify_all(std::uint64_t seed) {
    std::vector<SuiteCheck> out;
    Collector c(out);
    geometry_checks(c, seed);
    quadrature_checks(c);
    lagrange_checks(c, seed);
    constants_checks(c);
    diffquot_checks(c, seed);
    mesh_checks(c);
    fem_checks(c);
    return out;
}

bool all_passed(const std::vector<SuiteCheck>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const SuiteCheck& s) { return s.pass; });
}

void write_checks_csv(const std::vector<SuiteCheck>& checks, std::ostream& out) {
    out << "module,check,value,tolerance,status\n";
    for (const SuiteCheck& s : checks) {
        out << s.module << ',' << s.name << ',' << csv_number(s.value) << ',' << csv_number(s.tolerance) << ','
            << (s.pass ? "PASS" : "FAIL") << '\n';
    }
}

} // namespace cirest
