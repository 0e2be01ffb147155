#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cirest/constants.hpp"
#include "cirest/csv.hpp"
#include "cirest/diffquot.hpp"
#include "cirest/error.hpp"
#include "cirest/fem.hpp"
#include "cirest/geometry.hpp"
#include "cirest/lagrange.hpp"
#include "cirest/mesh.hpp"
#include "cirest/parallel.hpp"
#include "cirest/verify.hpp"

using namespace cirest;

namespace {

enum Exit { kSuccess = 0, kVerificationFailure = 1, kUsage = 2, kSolverFailure = 3 };

/// Writes to the file at `path`, or stdout when empty.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw std::ios_base::failure("cannot open " + path + " for writing");
        }
        path_ = path.empty() ? "<stdout>" : path;
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    void finish() {
        stream().flush();
        if (!stream()) throw std::ios_base::failure("write failed on " + path_);
    }

private:
    std::unique_ptr<std::ofstream> file_;
    std::string path_;
};

std::string num(double x) { return csv_number(x); }

double parse_p(const std::string& s) {
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    double p = 0.0;
    try {
        p = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || !(p >= 1.0)) throw InvalidArgument("--p must be a number >= 1 or 'inf', got " + s);
    return p;
}

int tri_report(const std::vector<double>& c, Output& out) {
    const Triangle t({c[0], c[1]}, {c[2], c[3]}, {c[4], c[5]});
    const TriangleMetrics m = triangle_metrics(t);
    auto& os = out.stream();
    os << "h_K,area,rho_K,R_K,min_angle,max_angle,chunkiness,R_over_h,C_K\n";
    os << num(m.diameter) << ',' << num(m.area) << ',' << num(m.inradius) << ',' << num(m.circumradius) << ','
       << num(m.min_angle()) << ',' << num(m.max_angle()) << ',' << num(m.chunkiness) << ','
       << num(m.semiregularity) << ',' << num(kobayashi_constant(t)) << '\n';
    return kSuccess;
}

struct InterpArgs {
    int k = 1;
    int m = 1;
    std::string p = "2";
    std::string family = "example1-left";
    double h_min = 1e-4;
    double h_max = 1e-1;
    int samples = 4;
    int random_starts = 16;
    int extra_degree = 4;
};

int interp_error(const InterpArgs& a, std::uint64_t seed, Output& out) {
    const auto rows = interp_sweep(a.k, a.m, parse_p(a.p), parse_family(a.family), a.h_min, a.h_max, a.samples,
                                   seed, a.random_starts, a.extra_degree);
    auto& os = out.stream();
    os << "h,h_K,R_K,rho_K,error,circumradius_bound,classical_bound,ratio\n";
    for (const SweepRow& r : rows) {
        os << num(r.h) << ',' << num(r.metrics.diameter) << ',' << num(r.metrics.circumradius) << ','
           << num(r.metrics.inradius) << ',' << num(r.at_sup.error) << ',' << num(r.at_sup.circumradius_bound)
           << ',' << num(r.at_sup.classical_bound) << ',' << num(r.at_sup.ratio) << '\n';
    }
    return kSuccess;
}

struct ConstantArgs {
    int k = 1;
    int m = 1;
    std::string p = "2";
    std::vector<double> alpha{1.0};
    std::vector<double> beta{1.0};
    int basis_degree = 8;
};

int constants(const ConstantArgs& a, std::uint64_t seed, Output& out) {
    const double p = parse_p(a.p);
    if (a.beta.size() != a.alpha.size() && a.beta.size() != 1) {
        throw InvalidArgument("--beta needs one value or as many values as --alpha");
    }
    auto& os = out.stream();
    os << "k,m,p,value,kind,N,alpha,beta,upper_bound\n";
    const bool babuska_aziz = a.k == 1 && a.m == 1 && p == 2.0;
    for (std::size_t i = 0; i < a.alpha.size(); ++i) {
        const double alpha = a.alpha[i];
        const double beta = a.beta.size() == 1 ? a.beta[0] : a.beta[i];
        const double scale = std::max(alpha, beta);
        // The known bound applies to squeezed triangles inside the reference one.
        std::string bound;
        if (babuska_aziz && scale <= 1.0) bound = num(scale * babuska_aziz_A2());
        const std::string prefix = std::to_string(a.k) + ',' + std::to_string(a.m) + ',' + num(p) + ',';
        if (babuska_aziz && alpha == 1.0 && beta == 1.0) {
            os << prefix << num(babuska_aziz_A2()) << ',' << kind_name(EstimateKind::exact_root) << ",,1,1," << bound
               << '\n';
        }
        const ConstantEstimate e = estimate_B(a.k, a.m, p, squeezed_triangle(alpha, beta), a.basis_degree, seed);
        os << prefix << num(e.value) << ',' << kind_name(e.kind) << ',' << e.basis_degree << ',' << num(alpha) << ','
           << num(beta) << ',' << bound << '\n';
    }
    return kSuccess;
}

int dq_verify(std::uint64_t seed, Output& out) {
    const auto checks = identity_suite(seed);
    auto& os = out.stream();
    os << "check,residual,tolerance,status\n";
    bool ok = true;
    for (const IdentityCheck& c : checks) {
        os << c.name << ',' << num(c.residual) << ',' << num(c.tolerance) << ',' << (c.pass ? "PASS" : "FAIL") << '\n';
        ok = ok && c.pass;
    }
    return ok ? kSuccess : kVerificationFailure;
}

struct MeshArgs {
    int n = 8;
    double alpha = 1.5;
    std::string pattern = "shifted-rows";
    std::string format = "csv";
};

int mesh_dump(const MeshArgs& a, Output& out) {
    const TriMesh mesh = build_aniso_mesh(a.n, a.alpha, parse_pattern(a.pattern));
    if (a.format == "off") {
        write_mesh_off(mesh, out.stream());
    } else {
        write_mesh_csv(mesh, out.stream());
    }
    return kSuccess;
}

int mesh_stats_cmd(const MeshArgs& a, Output& out) {
    const TriMesh mesh = build_aniso_mesh(a.n, a.alpha, parse_pattern(a.pattern));
    const MeshStats s = mesh_stats(mesh);
    auto& os = out.stream();
    os << "N,alpha,pattern,rows,vertices,elements,max_h,max_R,max_R_h,min_angle,max_angle,max_chunkiness,area\n";
    os << a.n << ',' << num(a.alpha) << ',' << pattern_name(mesh.pattern) << ',' << mesh.rows << ','
       << mesh.vertices.size() << ',' << s.elements << ',' << num(s.max_diameter) << ',' << num(s.max_circumradius)
       << ',' << num(s.max_r_times_h) << ',' << num(s.min_angle) << ',' << num(s.max_angle) << ','
       << num(s.max_chunkiness) << ',' << num(s.total_area) << '\n';
    return kSuccess;
}

struct ConvergenceArgs {
    int k = 1;
    std::vector<double> alphas{1.0, 1.4, 1.6, 1.8, 2.0};
    std::vector<int> ns{8, 16, 32, 64};
    double tol = 1e-10;
    std::string pattern = "shifted-rows";
};

int convergence(const ConvergenceArgs& a, Output& out) {
    const ConvergenceStudy study = convergence_study(a.k, a.alphas, a.ns, a.tol, parse_pattern(a.pattern));
    write_study_csv(study, out.stream());
    for (const StudyRow& r : study.rows) {
        if (!r.converged) return kSolverFailure;
    }
    return kSuccess;
}

int verify(std::uint64_t seed, Output& out) {
    const auto checks = verify_all(seed);
    write_checks_csv(checks, out.stream());
    return all_passed(checks) ? kSuccess : kVerificationFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interpolation error estimates on degenerate triangles"};
    app.require_subcommand(1);
    std::uint64_t seed = kDefaultSeed;
    std::string out_path;
    app.add_option("--seed", seed, "master RNG seed")->capture_default_str();
    app.add_option("-o,--out", out_path, "output file (default stdout)");
    // Subcommand flags are also accepted after the subcommand name.
    auto common = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "master RNG seed");
        sub->add_option("-o,--out", out_path, "output file (default stdout)");
    };

    std::vector<double> coords;
    auto* tri = app.add_subcommand("tri-report", "metrics of one triangle: x0 y0 x1 y1 x2 y2");
    tri->add_option("coords", coords, "vertex coordinates")->expected(6)->required();
    common(tri);

    InterpArgs ia;
    auto* ie = app.add_subcommand("interp-error", "sup of the circumradius bound ratio along a triangle family");
    ie->add_option("--k", ia.k)->capture_default_str();
    ie->add_option("--m", ia.m)->capture_default_str();
    ie->add_option("--p", ia.p, "exponent, or inf")->capture_default_str();
    ie->add_option("--family", ia.family)
        ->check(CLI::IsMember({"random", "example1-left", "example1-right"}))
        ->capture_default_str();
    ie->add_option("--h-min", ia.h_min)->capture_default_str();
    ie->add_option("--h-max", ia.h_max)->capture_default_str();
    ie->add_option("--samples", ia.samples)->capture_default_str();
    ie->add_option("--random-starts", ia.random_starts)->capture_default_str();
    ie->add_option("--extra-degree", ia.extra_degree)->capture_default_str();
    common(ie);

    ConstantArgs ca;
    auto* co = app.add_subcommand("constants", "lower-bound estimates of B on squeezed triangles");
    co->add_option("--k", ca.k)->capture_default_str();
    co->add_option("--m", ca.m)->capture_default_str();
    co->add_option("--p", ca.p, "exponent, or inf")->capture_default_str();
    co->add_option("--alpha", ca.alpha, "comma-separated list")->delimiter(',')->capture_default_str();
    co->add_option("--beta", ca.beta, "comma-separated list")->delimiter(',')->capture_default_str();
    co->add_option("--basis-degree", ca.basis_degree)->capture_default_str();
    common(co);

    auto* dq = app.add_subcommand("dq-verify", "difference-quotient identity suite");
    common(dq);

    MeshArgs ma;
    auto* md = app.add_subcommand("mesh-dump", "mesh vertices and triangles");
    auto* ms = app.add_subcommand("mesh-stats", "mesh quality summary");
    for (auto* sub : {md, ms}) {
        sub->add_option("--N", ma.n, "cells per side")->capture_default_str();
        sub->add_option("--alpha", ma.alpha)->capture_default_str();
        sub->add_option("--pattern", ma.pattern)
            ->check(CLI::IsMember({"shifted-rows", "center-split"}))
            ->capture_default_str();
        common(sub);
    }
    md->add_option("--format", ma.format)->check(CLI::IsMember({"csv", "off"}))->capture_default_str();

    ConvergenceArgs cv;
    auto* conv = app.add_subcommand("convergence", "FEM H1 error study on the anisotropic meshes");
    conv->add_option("--k", cv.k)->check(CLI::Range(1, 2))->capture_default_str();
    conv->add_option("--alphas", cv.alphas)->delimiter(',')->capture_default_str();
    conv->add_option("--Ns", cv.ns)->delimiter(',')->capture_default_str();
    conv->add_option("--tol", cv.tol)->capture_default_str();
    conv->add_option("--pattern", cv.pattern)
        ->check(CLI::IsMember({"shifted-rows", "center-split"}))
        ->capture_default_str();
    common(conv);

    auto* va = app.add_subcommand("verify-all", "invariant checks of every module");
    common(va);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kSuccess : kUsage;
    }

    try {
        Output out(out_path);
        int code = kSuccess;
        if (*tri) code = tri_report(coords, out);
        else if (*ie) code = interp_error(ia, seed, out);
        else if (*co) code = constants(ca, seed, out);
        else if (*dq) code = dq_verify(seed, out);
        else if (*md) code = mesh_dump(ma, out);
        else if (*ms) code = mesh_stats_cmd(ma, out);
        else if (*conv) code = convergence(cv, out);
        else if (*va) code = verify(seed, out);
        out.finish();
        return code;
    } catch (const ConvergenceFailure& e) {
        std::cerr << "cirest: solver failure: " << e.what() << '\n';
        return kSolverFailure;
    } catch (const InvalidArgument& e) {
        std::cerr << "cirest: " << e.what() << '\n';
        return kUsage;
    } catch (const DegenerateTriangle& e) {
        std::cerr << "cirest: " << e.what() << '\n';
        return kUsage;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "cirest: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "cirest: " << e.what() << '\n';
        return kVerificationFailure;
    }
}
