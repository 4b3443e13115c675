#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "nlsw/mesh.hpp"

namespace nlsw {

// Mesh file format:
//   line 1:            nv nt
//   next nv lines:     x y boundary_flag
//   next nt lines:     v0 v1 v2          (0-based)
// Coordinates use 17 significant digits, which round-trips doubles exactly.
// The domain shape is not stored; read_mesh returns a UnitSquare-tagged mesh
// unless a "# disk cx cy r" comment follows the header.

inline void write_mesh(const TriangleMesh& mesh, std::ostream& out) {
    out << mesh.vertex_count() << ' ' << mesh.triangle_count() << '\n';
    if (const auto* disk = std::get_if<Disk>(&mesh.shape)) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "# disk %.17g %.17g %.17g",
                      disk->center.x, disk->center.y, disk->radius);
        out << buf << '\n';
    }
    char line[96];
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        std::snprintf(line, sizeof(line), "%.17g %.17g %d",
                      mesh.vertices[v].x, mesh.vertices[v].y,
                      static_cast<int>(mesh.boundary_vertex[v]));
        out << line << '\n';
    }
    for (const auto& tr : mesh.triangles)
        out << tr.v[0] << ' ' << tr.v[1] << ' ' << tr.v[2] << '\n';
}

class MeshParseError : public std::runtime_error {
public:
    MeshParseError(int line, const std::string& what)
        : std::runtime_error("mesh parse error at line " + std::to_string(line) + ": " + what),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

inline TriangleMesh read_mesh(std::istream& in) {
    TriangleMesh mesh;
    mesh.shape = UnitSquare{};
    std::string line;
    int lineno = 0;

    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            return true;
        }
        return false;
    };

    if (!next_line()) throw MeshParseError(1, "empty file");
    int nv = 0, nt = 0;
    {
        std::istringstream ss(line);
        if (!(ss >> nv >> nt) || nv < 3 || nt < 1)
            throw MeshParseError(lineno, "expected 'nv nt' header");
    }

    bool pending = false;
    if (next_line()) {
        if (!line.empty() && line[0] == '#') {
            std::istringstream ss(line.substr(1));
            std::string tag;
            double cx, cy, r;
            if (ss >> tag >> cx >> cy >> r && tag == "disk")
                mesh.shape = Disk{{cx, cy}, r};
        } else {
            pending = true;
        }
    } else {
        throw MeshParseError(lineno + 1, "unexpected end of file");
    }

    mesh.vertices.reserve(nv);
    mesh.boundary_vertex.reserve(nv);
    for (int v = 0; v < nv; ++v) {
        if (!pending && !next_line())
            throw MeshParseError(lineno + 1, "unexpected end of file in vertex block");
        pending = false;
        std::istringstream ss(line);
        double x, y;
        int flag;
        if (!(ss >> x >> y >> flag) || (flag != 0 && flag != 1))
            throw MeshParseError(lineno, "expected 'x y flag' with flag 0 or 1");
        mesh.vertices.push_back({x, y});
        mesh.boundary_vertex.push_back(static_cast<char>(flag));
    }
    for (int t = 0; t < nt; ++t) {
        if (!next_line())
            throw MeshParseError(lineno + 1, "unexpected end of file in triangle block");
        std::istringstream ss(line);
        int a, b, c;
        if (!(ss >> a >> b >> c))
            throw MeshParseError(lineno, "expected 'v0 v1 v2'");
        if (a < 0 || a >= nv || b < 0 || b >= nv || c < 0 || c >= nv)
            throw MeshParseError(lineno, "vertex index out of range");
        mesh.triangles.push_back({{a, b, c}});
    }
    check_mesh(mesh);
    return mesh;
}

} // namespace nlsw
