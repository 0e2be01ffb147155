#ifndef CIREST_MESH_HPP
#define CIREST_MESH_HPP

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "cirest/geometry.hpp"

namespace cirest {

/// Cell pattern of the structured square mesh.
enum class MeshPattern {
    /// Strips of alternating up/down isosceles triangles (base h, height v); every other vertex row
    /// is shifted by h/2 and closed with right triangles at x = -1 and x = 1.
    shifted_rows,
    /// Each h x v cell split by its center into four triangles (bottom, right, top, left).
    center_split,
};

std::string pattern_name(MeshPattern pattern);
/// Throws InvalidArgument on an unknown name.
MeshPattern parse_pattern(const std::string& name);

struct TriMesh {
    std::vector<Point> vertices;
    std::vector<std::array<int, 3>> triangles; // counterclockwise
    std::vector<bool> boundary;                 // vertex lies on the boundary of (-1,1)^2
    int n = 0;
    double alpha = 1.0;
    int rows = 0;            // M
    double row_height = 0.0; // 2 / M
    MeshPattern pattern = MeshPattern::shifted_rows;

    Triangle triangle(std::size_t e) const;
    double base_length() const { return 2.0 / n; }
};

/// Number of vertex rows of height 2/M: M = floor(2 / h^alpha) for alpha > 1. For alpha = 1 the
/// element height is h/2, i.e. M = 2N for shifted rows and M = N for the center split.
int row_count(int n, double alpha, MeshPattern pattern);

/// Mesh of (-1,1)^2 with N columns of width h = 2/N. Throws InvalidArgument for N < 2, alpha < 1
/// or M = 0.
TriMesh build_aniso_mesh(int n, double alpha, MeshPattern pattern = MeshPattern::shifted_rows);

/// Circumradius of the interior isosceles element of the given mesh parameters.
double nominal_circumradius(int n, double alpha, MeshPattern pattern = MeshPattern::shifted_rows);

/// Closed-form vertex and triangle counts of build_aniso_mesh.
std::size_t expected_vertex_count(int n, int rows, MeshPattern pattern);
std::size_t expected_triangle_count(int n, int rows, MeshPattern pattern);

struct MeshStats {
    std::size_t elements = 0;
    double max_diameter = 0.0;     // max h_K
    double max_circumradius = 0.0; // max R_K
    double max_chunkiness = 0.0;   // max h_K / rho_K
    double min_angle = 0.0;
    double max_angle = 0.0;
    double max_r_times_h = 0.0; // max R_K h_K
    double total_area = 0.0;
};

MeshStats mesh_stats(const TriMesh& mesh);

struct ConformityReport {
    std::size_t interior_edges = 0;
    std::size_t boundary_edges = 0;
    std::size_t bad_edges = 0;      // shared by more than two triangles, or boundary-incident off the square
    std::size_t bad_triangles = 0;  // non-positive area or non-counterclockwise
    std::size_t bad_boundary_flags = 0;
    double area_error = 0.0; // |sum of areas - 4|

    bool ok() const {
        return bad_edges == 0 && bad_triangles == 0 && bad_boundary_flags == 0 && area_error <= 1e-10;
    }
};

ConformityReport check_conformity(const TriMesh& mesh);

/// Unique edges (a < b) and, per triangle, the edge index opposite each local vertex.
struct EdgeTable {
    std::vector<std::array<int, 2>> edges;
    std::vector<std::array<int, 3>> triangle_edges;
    std::vector<int> multiplicity;
};

EdgeTable build_edges(const TriMesh& mesh);

/// "type,index,a,b,c" rows: vertex rows carry x, y, boundary flag; triangle rows the vertex indices.
void write_mesh_csv(const TriMesh& mesh, std::ostream& out);
void write_mesh_off(const TriMesh& mesh, std::ostream& out);

} // namespace cirest

#endif // CIREST_MESH_HPP
