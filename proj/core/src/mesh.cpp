#include "cirest/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>

#include "cirest/csv.hpp"
#include "cirest/error.hpp"
#include "cirest/parallel.hpp"

namespace cirest {

std::string pattern_name(MeshPattern pattern) {
    switch (pattern) {
    case MeshPattern::shifted_rows:
        return "shifted-rows";
    case MeshPattern::center_split:
        return "center-split";
    }
    return "unknown";
}

MeshPattern parse_pattern(const std::string& name) {
    if (name == "shifted-rows") return MeshPattern::shifted_rows;
    if (name == "center-split") return MeshPattern::center_split;
    throw InvalidArgument("unknown mesh pattern '" + name + "'");
}

Triangle TriMesh::triangle(std::size_t e) const {
    const auto& t = triangles[e];
    return Triangle(vertices[static_cast<std::size_t>(t[0])], vertices[static_cast<std::size_t>(t[1])],
                    vertices[static_cast<std::size_t>(t[2])]);
}

int row_count(int n, double alpha, MeshPattern pattern) {
    if (n < 2) throw InvalidArgument("build_aniso_mesh: need N >= 2");
    if (!(alpha >= 1.0)) throw InvalidArgument("build_aniso_mesh: need alpha >= 1");
    if (alpha == 1.0) return pattern == MeshPattern::shifted_rows ? 2 * n : n;
    const double h = 2.0 / n;
    // The relative nudge keeps exact quotients such as 2/h^2 = N^2/2 from flooring one short.
    const double m = std::floor(2.0 / std::pow(h, alpha) * (1.0 + 1e-12));
    if (m < 1.0) throw InvalidArgument("build_aniso_mesh: floor(2/h^alpha) = 0");
    if (m > static_cast<double>(std::numeric_limits<int>::max())) throw InvalidArgument("build_aniso_mesh: too many rows");
    return static_cast<int>(m);
}

std::size_t expected_vertex_count(int n, int rows, MeshPattern pattern) {
    const auto nn = static_cast<std::size_t>(n);
    const auto m = static_cast<std::size_t>(rows);
    if (pattern == MeshPattern::center_split) return (nn + 1) * (m + 1) + nn * m;
    return (m / 2 + 1) * (nn + 1) + ((m + 1) / 2) * (nn + 2);
}

std::size_t expected_triangle_count(int n, int rows, MeshPattern pattern) {
    const auto nn = static_cast<std::size_t>(n);
    const auto m = static_cast<std::size_t>(rows);
    return pattern == MeshPattern::center_split ? 4 * nn * m : m * (2 * nn + 1);
}

double nominal_circumradius(int n, double alpha, MeshPattern pattern) {
    const double h = 2.0 / n;
    const double v = 2.0 / row_count(n, alpha, pattern);
    if (pattern == MeshPattern::shifted_rows) return h * h / (8.0 * v) + v / 2.0;
    return std::max(h * h / (4.0 * v) + v / 4.0, v * v / (4.0 * h) + h / 4.0);
}

namespace {

bool on_square_boundary(Point p) { return p.x == -1.0 || p.x == 1.0 || p.y == -1.0 || p.y == 1.0; }

double row_y(int j, int m) { return j == m ? 1.0 : -1.0 + 2.0 * j / m; }

void build_shifted(TriMesh& mesh) {
    const int n = mesh.n;
    const int m = mesh.rows;
    std::vector<std::vector<int>> line(static_cast<std::size_t>(m + 1));
    for (int j = 0; j <= m; ++j) {
        const double y = row_y(j, m);
        auto& ids = line[static_cast<std::size_t>(j)];
        auto add = [&](double x) {
            ids.push_back(static_cast<int>(mesh.vertices.size()));
            mesh.vertices.push_back({x, y});
        };
        if (j % 2 == 0) {
            for (int i = 0; i <= n; ++i) add(i == n ? 1.0 : -1.0 + 2.0 * i / n);
        } else {
            add(-1.0);
            for (int i = 0; i < n; ++i) add(-1.0 + (2.0 * i + 1.0) / n);
            add(1.0);
        }
    }
    for (int j = 0; j < m; ++j) {
        const auto& lo = line[static_cast<std::size_t>(j)];
        const auto& up = line[static_cast<std::size_t>(j + 1)];
        auto x = [&](int id) { return mesh.vertices[static_cast<std::size_t>(id)].x; };
        std::size_t a = 0;
        std::size_t b = 0;
        while (a + 1 < lo.size() || b + 1 < up.size()) {
            // Take the candidate edge whose midpoint lies further left; this also settles the tie at x = 1.
            const bool advance_lower =
                b + 1 == up.size() ||
                (a + 1 < lo.size() && x(lo[a]) + x(lo[a + 1]) < x(up[b]) + x(up[b + 1]));
            if (advance_lower) {
                mesh.triangles.push_back({lo[a], lo[a + 1], up[b]});
                ++a;
            } else {
                mesh.triangles.push_back({lo[a], up[b + 1], up[b]});
                ++b;
            }
        }
    }
}

void build_center_split(TriMesh& mesh) {
    const int n = mesh.n;
    const int m = mesh.rows;
    for (int j = 0; j <= m; ++j)
        for (int i = 0; i <= n; ++i) mesh.vertices.push_back({i == n ? 1.0 : -1.0 + 2.0 * i / n, row_y(j, m)});
    const int centers = static_cast<int>(mesh.vertices.size());
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i)
            mesh.vertices.push_back({-1.0 + (2.0 * i + 1.0) / n, 0.5 * (row_y(j, m) + row_y(j + 1, m))});
    auto g = [n](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i) {
            const int c = centers + j * n + i;
            mesh.triangles.push_back({g(i, j), g(i + 1, j), c});
            mesh.triangles.push_back({g(i + 1, j), g(i + 1, j + 1), c});
            mesh.triangles.push_back({g(i + 1, j + 1), g(i, j + 1), c});
            mesh.triangles.push_back({g(i, j + 1), g(i, j), c});
        }
}

MeshStats merge(MeshStats a, const MeshStats& b) {
    a.elements += b.elements;
    a.max_diameter = std::max(a.max_diameter, b.max_diameter);
    a.max_circumradius = std::max(a.max_circumradius, b.max_circumradius);
    a.max_chunkiness = std::max(a.max_chunkiness, b.max_chunkiness);
    a.min_angle = std::min(a.min_angle, b.min_angle);
    a.max_angle = std::max(a.max_angle, b.max_angle);
    a.max_r_times_h = std::max(a.max_r_times_h, b.max_r_times_h);
    a.total_area += b.total_area;
    return a;
}

} // namespace

TriMesh build_aniso_mesh(int n, double alpha, MeshPattern pattern) {
    TriMesh mesh;
    mesh.n = n;
    mesh.alpha = alpha;
    mesh.pattern = pattern;
    mesh.rows = row_count(n, alpha, pattern);
    mesh.row_height = 2.0 / mesh.rows;
    mesh.vertices.reserve(expected_vertex_count(n, mesh.rows, pattern));
    mesh.triangles.reserve(expected_triangle_count(n, mesh.rows, pattern));
    if (pattern == MeshPattern::shifted_rows) {
        build_shifted(mesh);
    } else {
        build_center_split(mesh);
    }
    mesh.boundary.resize(mesh.vertices.size());
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) mesh.boundary[i] = on_square_boundary(mesh.vertices[i]);
    return mesh;
}

MeshStats mesh_stats(const TriMesh& mesh) {
    const std::size_t count = mesh.triangles.size();
    // Fixed chunking keeps the area sum independent of the thread count.
    const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(64, count));
    MeshStats init;
    init.min_angle = 4.0;
    std::vector<MeshStats> partial(chunks, init);
    parallel_for(chunks, [&](std::size_t c) {
        MeshStats& s = partial[c];
        for (std::size_t e = c * count / chunks; e < (c + 1) * count / chunks; ++e) {
            const TriangleMetrics m = triangle_metrics(mesh.triangle(e));
            s.elements += 1;
            s.max_diameter = std::max(s.max_diameter, m.diameter);
            s.max_circumradius = std::max(s.max_circumradius, m.circumradius);
            s.max_chunkiness = std::max(s.max_chunkiness, m.chunkiness);
            s.min_angle = std::min(s.min_angle, m.min_angle());
            s.max_angle = std::max(s.max_angle, m.max_angle());
            s.max_r_times_h = std::max(s.max_r_times_h, m.circumradius * m.diameter);
            s.total_area += m.area;
        }
    });
    MeshStats out = init;
    for (const auto& p : partial) out = merge(out, p);
    return out;
}

EdgeTable build_edges(const TriMesh& mesh) {
    const auto nv = static_cast<std::uint64_t>(mesh.vertices.size());
    std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed;
    keyed.reserve(3 * mesh.triangles.size());
    for (std::size_t e = 0; e < mesh.triangles.size(); ++e) {
        const auto& t = mesh.triangles[e];
        for (int l = 0; l < 3; ++l) {
            auto a = static_cast<std::uint64_t>(t[static_cast<std::size_t>((l + 1) % 3)]);
            auto b = static_cast<std::uint64_t>(t[static_cast<std::size_t>((l + 2) % 3)]);
            if (a > b) std::swap(a, b);
            keyed.emplace_back(a * nv + b, static_cast<std::uint32_t>(3 * e + static_cast<std::size_t>(l)));
        }
    }
    std::sort(keyed.begin(), keyed.end());
    EdgeTable table;
    table.triangle_edges.resize(mesh.triangles.size());
    for (std::size_t i = 0; i < keyed.size(); ++i) {
        if (i == 0 || keyed[i].first != keyed[i - 1].first) {
            table.edges.push_back({static_cast<int>(keyed[i].first / nv), static_cast<int>(keyed[i].first % nv)});
            table.multiplicity.push_back(0);
        }
        table.multiplicity.back() += 1;
        const std::uint32_t slot = keyed[i].second;
        table.triangle_edges[slot / 3][slot % 3] = static_cast<int>(table.edges.size() - 1);
    }
    return table;
}

ConformityReport check_conformity(const TriMesh& mesh) {
    ConformityReport r;
    double area = 0.0;
    for (const auto& t : mesh.triangles) {
        const Point a = mesh.vertices[static_cast<std::size_t>(t[0])];
        const Point b = mesh.vertices[static_cast<std::size_t>(t[1])];
        const Point c = mesh.vertices[static_cast<std::size_t>(t[2])];
        const double twice = cross(b - a, c - a);
        if (!(twice > 0.0)) ++r.bad_triangles;
        area += 0.5 * twice;
    }
    r.area_error = std::abs(area - 4.0);

    const EdgeTable table = build_edges(mesh);
    std::vector<bool> touches_boundary_edge(mesh.vertices.size(), false);
    for (std::size_t i = 0; i < table.edges.size(); ++i) {
        const auto [a, b] = table.edges[i];
        const Point p = mesh.vertices[static_cast<std::size_t>(a)];
        const Point q = mesh.vertices[static_cast<std::size_t>(b)];
        const bool same_side = (p.x == q.x && std::abs(p.x) == 1.0) || (p.y == q.y && std::abs(p.y) == 1.0);
        if (table.multiplicity[i] == 2) {
            ++r.interior_edges;
            if (same_side) ++r.bad_edges;
        } else if (table.multiplicity[i] == 1) {
            ++r.boundary_edges;
            if (!same_side) ++r.bad_edges;
            touches_boundary_edge[static_cast<std::size_t>(a)] = true;
            touches_boundary_edge[static_cast<std::size_t>(b)] = true;
        } else {
            ++r.bad_edges;
        }
    }
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
        if (mesh.boundary[v] != touches_boundary_edge[v]) ++r.bad_boundary_flags;
    }
    return r;
}

void write_mesh_csv(const TriMesh& mesh, std::ostream& out) {
    out << "type,index,a,b,c\n";
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        out << "vertex," << i << ',' << csv_number(mesh.vertices[i].x) << ',' << csv_number(mesh.vertices[i].y) << ','
            << (mesh.boundary[i] ? 1 : 0) << '\n';
    }
    for (std::size_t e = 0; e < mesh.triangles.size(); ++e) {
        const auto& t = mesh.triangles[e];
        out << "triangle," << e << ',' << t[0] << ',' << t[1] << ',' << t[2] << '\n';
    }
}

void write_mesh_off(const TriMesh& mesh, std::ostream& out) {
    out << "OFF\n" << mesh.vertices.size() << ' ' << mesh.triangles.size() << " 0\n";
    for (const auto& p : mesh.vertices) out << csv_number(p.x) << ' ' << csv_number(p.y) << " 0\n";
    for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

} // namespace cirest
