#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace nlsw {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline bool finite(const Point2& p) {
    return std::isfinite(p.x) && std::isfinite(p.y);
}

struct Triangle {
    std::array<int, 3> v{};
};

struct UnitSquare {};

struct Disk {
    Point2 center;
    double radius = 0.0;
};

using DomainShape = std::variant<UnitSquare, Disk>;

inline double signed_area(const Point2& a, const Point2& b, const Point2& c) {
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

/// Conforming triangulation with boundary-vertex flags. Immutable after
/// construction; all triangles are counter-clockwise.
struct TriangleMesh {
    DomainShape shape;
    std::vector<Point2> vertices;
    std::vector<Triangle> triangles;
    std::vector<char> boundary_vertex;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int triangle_count() const { return static_cast<int>(triangles.size()); }

    double triangle_area(int t) const {
        const auto& tr = triangles[t];
        return signed_area(vertices[tr.v[0]], vertices[tr.v[1]], vertices[tr.v[2]]);
    }

    double total_area() const {
        double a = 0.0;
        for (int t = 0; t < triangle_count(); ++t) a += triangle_area(t);
        return a;
    }

    double triangle_diameter(int t) const {
        const auto& tr = triangles[t];
        double d = 0.0;
        for (int e = 0; e < 3; ++e) {
            const Point2& p = vertices[tr.v[e]];
            const Point2& q = vertices[tr.v[(e + 1) % 3]];
            d = std::max(d, std::hypot(p.x - q.x, p.y - q.y));
        }
        return d;
    }

    /// h = max triangle diameter.
    double mesh_size() const {
        double h = 0.0;
        for (int t = 0; t < triangle_count(); ++t) h = std::max(h, triangle_diameter(t));
        return h;
    }

    double min_angle_deg() const {
        double amin = 180.0;
        for (const auto& tr : triangles) {
            for (int k = 0; k < 3; ++k) {
                const Point2& a = vertices[tr.v[k]];
                const Point2& b = vertices[tr.v[(k + 1) % 3]];
                const Point2& c = vertices[tr.v[(k + 2) % 3]];
                double ux = b.x - a.x, uy = b.y - a.y;
                double vx = c.x - a.x, vy = c.y - a.y;
                double cosang = (ux * vx + uy * vy) / (std::hypot(ux, uy) * std::hypot(vx, vy));
                cosang = std::clamp(cosang, -1.0, 1.0);
                amin = std::min(amin, std::acos(cosang) * 180.0 / M_PI);
            }
        }
        return amin;
    }
};

namespace detail {

using EdgeKey = std::pair<int, int>;

inline EdgeKey edge_key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

/// Edge -> number of incident triangles.
inline std::map<EdgeKey, int> edge_incidence(const TriangleMesh& mesh) {
    std::map<EdgeKey, int> inc;
    for (const auto& tr : mesh.triangles)
        for (int e = 0; e < 3; ++e)
            inc[edge_key(tr.v[e], tr.v[(e + 1) % 3])] += 1;
    return inc;
}

} // namespace detail

/// Validates the TriangleMesh invariants; throws std::runtime_error on the
/// first violation found.
inline void check_mesh(const TriangleMesh& mesh) {
    const int nv = mesh.vertex_count();
    for (const auto& p : mesh.vertices)
        if (!finite(p)) throw std::runtime_error("mesh: non-finite vertex coordinate");
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tr = mesh.triangles[t];
        for (int k = 0; k < 3; ++k) {
            if (tr.v[k] < 0 || tr.v[k] >= nv)
                throw std::runtime_error("mesh: vertex index out of range in triangle " + std::to_string(t));
        }
        if (tr.v[0] == tr.v[1] || tr.v[1] == tr.v[2] || tr.v[0] == tr.v[2])
            throw std::runtime_error("mesh: repeated vertex in triangle " + std::to_string(t));
        if (mesh.triangle_area(t) <= 0.0)
            throw std::runtime_error("mesh: non-positive area in triangle " + std::to_string(t));
    }
    if (static_cast<int>(mesh.boundary_vertex.size()) != nv)
        throw std::runtime_error("mesh: boundary flag array size mismatch");

    auto inc = detail::edge_incidence(mesh);
    std::vector<char> on_boundary_edge(nv, 0);
    for (const auto& [e, count] : inc) {
        if (count > 2) throw std::runtime_error("mesh: edge shared by more than 2 triangles");
        if (count == 1) {
            on_boundary_edge[e.first] = 1;
            on_boundary_edge[e.second] = 1;
        }
    }
    for (int v = 0; v < nv; ++v)
        if (on_boundary_edge[v] != mesh.boundary_vertex[v])
            throw std::runtime_error("mesh: boundary flag inconsistent at vertex " + std::to_string(v));

    if (const auto* disk = std::get_if<Disk>(&mesh.shape)) {
        for (int v = 0; v < nv; ++v) {
            if (!mesh.boundary_vertex[v]) continue;
            double r = std::hypot(mesh.vertices[v].x - disk->center.x,
                                  mesh.vertices[v].y - disk->center.y);
            if (std::abs(r - disk->radius) > 1e-12)
                throw std::runtime_error("mesh: boundary vertex off the circle at vertex " + std::to_string(v));
        }
    }
}

/// Uniform triangulation of [0,1]^2: n x n cells, each split along the
/// lower-left to upper-right diagonal.
inline TriangleMesh unit_square_mesh(int n) {
    if (n < 1) throw std::invalid_argument("unit_square_mesh: n must be >= 1");
    TriangleMesh mesh;
    mesh.shape = UnitSquare{};
    mesh.vertices.reserve(static_cast<size_t>(n + 1) * (n + 1));
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            mesh.vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
    auto vid = [n](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            int v00 = vid(i, j), v10 = vid(i + 1, j);
            int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
            mesh.triangles.push_back({{v00, v10, v11}});
            mesh.triangles.push_back({{v00, v11, v01}});
        }
    }
    mesh.boundary_vertex.assign(mesh.vertices.size(), 0);
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            if (i == 0 || j == 0 || i == n || j == n) mesh.boundary_vertex[vid(i, j)] = 1;
    return mesh;
}

/// Red refinement: each triangle splits into 4 via edge midpoints. For Disk
/// meshes, midpoints of boundary edges are projected radially onto the circle.
inline TriangleMesh refine(const TriangleMesh& mesh) {
    TriangleMesh fine;
    fine.shape = mesh.shape;
    fine.vertices = mesh.vertices;

    auto inc = detail::edge_incidence(mesh);
    const auto* disk = std::get_if<Disk>(&mesh.shape);

    std::map<detail::EdgeKey, int> midpoint;
    for (const auto& [e, count] : inc) {
        const Point2& a = mesh.vertices[e.first];
        const Point2& b = mesh.vertices[e.second];
        Point2 m{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
        bool boundary_edge = (count == 1);
        if (disk && boundary_edge) {
            double dx = m.x - disk->center.x, dy = m.y - disk->center.y;
            double r = std::hypot(dx, dy);
            m = {disk->center.x + disk->radius * dx / r, disk->center.y + disk->radius * dy / r};
        }
        midpoint[e] = static_cast<int>(fine.vertices.size());
        fine.vertices.push_back(m);
    }

    for (const auto& tr : mesh.triangles) {
        int a = tr.v[0], b = tr.v[1], c = tr.v[2];
        int ab = midpoint[detail::edge_key(a, b)];
        int bc = midpoint[detail::edge_key(b, c)];
        int ca = midpoint[detail::edge_key(c, a)];
        fine.triangles.push_back({{a, ab, ca}});
        fine.triangles.push_back({{ab, b, bc}});
        fine.triangles.push_back({{ca, bc, c}});
        fine.triangles.push_back({{ab, bc, ca}});
    }

    fine.boundary_vertex.assign(fine.vertices.size(), 0);
    for (int v = 0; v < mesh.vertex_count(); ++v)
        fine.boundary_vertex[v] = mesh.boundary_vertex[v];
    for (const auto& [e, count] : inc)
        if (count == 1) fine.boundary_vertex[midpoint[e]] = 1;
    return fine;
}

/// Disk mesh: level 0 is a 6-triangle fan over the inscribed regular hexagon,
/// each further level is one red refinement with boundary projection.
inline TriangleMesh disk_mesh(Point2 center, double radius, int level) {
    if (radius <= 0.0) throw std::invalid_argument("disk_mesh: radius must be positive");
    if (level < 0) throw std::invalid_argument("disk_mesh: level must be nonnegative");
    TriangleMesh mesh;
    mesh.shape = Disk{center, radius};
    mesh.vertices.push_back(center);
    for (int k = 0; k < 6; ++k) {
        double ang = 2.0 * M_PI * k / 6.0;
        mesh.vertices.push_back({center.x + radius * std::cos(ang), center.y + radius * std::sin(ang)});
    }
    for (int k = 0; k < 6; ++k)
        mesh.triangles.push_back({{0, 1 + k, 1 + (k + 1) % 6}});
    mesh.boundary_vertex.assign(7, 1);
    mesh.boundary_vertex[0] = 0;
    for (int l = 0; l < level; ++l) mesh = refine(mesh);
    return mesh;
}

} // namespace nlsw
