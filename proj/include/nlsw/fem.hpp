#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

#include "nlsw/fields.hpp"
#include "nlsw/mesh.hpp"
#include "nlsw/quadrature.hpp"
#include "nlsw/sparse.hpp"

namespace nlsw {

using DofVector = CVector;

/// P1/P2 Lagrange space. Dof ordering: mesh vertices first, then (for P2)
/// edge midpoints with edges sorted by their (min,max) endpoint pair.
struct FeSpace {
    const TriangleMesh* mesh = nullptr;
    int degree = 1;
    std::vector<Point2> dof_coords;
    std::vector<std::vector<int>> cell_dofs; // 3 (P1) or 6 (P2) per triangle
    std::vector<char> is_boundary_dof;
    std::vector<int> boundary_dofs;
    std::vector<int> free_dofs;
    std::vector<int> free_index; // global dof -> free position, -1 on boundary

    int dof_count() const { return static_cast<int>(dof_coords.size()); }
    int local_size() const { return degree == 1 ? 3 : 6; }
};

namespace detail {

// Basis values and reference-coordinate gradients at a barycentric point.
// Local order: 3 vertex functions, then (P2) midpoints of edges (0,1),(1,2),(2,0).
inline void eval_basis(int degree, double l0, double l1, double l2, double* phi,
                       double (*gref)[2]) {
    // reference coordinates: l1 = xi, l2 = eta, l0 = 1 - xi - eta
    if (degree == 1) {
        phi[0] = l0;
        phi[1] = l1;
        phi[2] = l2;
        if (gref) {
            gref[0][0] = -1; gref[0][1] = -1;
            gref[1][0] = 1;  gref[1][1] = 0;
            gref[2][0] = 0;  gref[2][1] = 1;
        }
        return;
    }
    phi[0] = l0 * (2 * l0 - 1);
    phi[1] = l1 * (2 * l1 - 1);
    phi[2] = l2 * (2 * l2 - 1);
    phi[3] = 4 * l0 * l1;
    phi[4] = 4 * l1 * l2;
    phi[5] = 4 * l2 * l0;
    if (gref) {
        // d/dxi, d/deta with dl0 = (-1,-1), dl1 = (1,0), dl2 = (0,1)
        gref[0][0] = -(4 * l0 - 1); gref[0][1] = -(4 * l0 - 1);
        gref[1][0] = 4 * l1 - 1;    gref[1][1] = 0;
        gref[2][0] = 0;             gref[2][1] = 4 * l2 - 1;
        gref[3][0] = 4 * (l0 - l1); gref[3][1] = -4 * l1;
        gref[4][0] = 4 * l2;        gref[4][1] = 4 * l1;
        gref[5][0] = -4 * l2;       gref[5][1] = 4 * (l0 - l2);
    }
}

struct CellGeometry {
    Point2 a, b, c;
    double jac;         // |det J| = 2*area
    double inv_t[2][2]; // J^{-T}

    CellGeometry(const TriangleMesh& mesh, int t) {
        const auto& tr = mesh.triangles[t];
        a = mesh.vertices[tr.v[0]];
        b = mesh.vertices[tr.v[1]];
        c = mesh.vertices[tr.v[2]];
        double j11 = b.x - a.x, j12 = c.x - a.x;
        double j21 = b.y - a.y, j22 = c.y - a.y;
        double det = j11 * j22 - j12 * j21;
        jac = std::abs(det);
        // J^{-1} = 1/det [j22 -j12; -j21 j11]; transpose it
        inv_t[0][0] = j22 / det;  inv_t[0][1] = -j21 / det;
        inv_t[1][0] = -j12 / det; inv_t[1][1] = j11 / det;
    }

    Point2 map(double l0, double l1, double l2) const {
        return {l0 * a.x + l1 * b.x + l2 * c.x, l0 * a.y + l1 * b.y + l2 * c.y};
    }
};

// Reference-element basis data tabulated at the quadrature points of a rule.
struct BasisTable {
    int nloc;
    std::vector<std::vector<double>> phi;          // [q][i]
    std::vector<std::vector<std::array<double, 2>>> gref; // [q][i]

    BasisTable(int degree, const TriangleQuadrature& rule) {
        nloc = degree == 1 ? 3 : 6;
        phi.resize(rule.points.size());
        gref.resize(rule.points.size());
        for (size_t q = 0; q < rule.points.size(); ++q) {
            phi[q].resize(nloc);
            gref[q].resize(nloc);
            double g[6][2];
            eval_basis(degree, rule.points[q].l0, rule.points[q].l1, rule.points[q].l2,
                       phi[q].data(), g);
            for (int i = 0; i < nloc; ++i) gref[q][i] = {g[i][0], g[i][1]};
        }
    }
};

inline std::vector<std::vector<int>> sparsity_pattern(const FeSpace& space) {
    std::vector<std::vector<int>> rows(space.dof_count());
    for (const auto& dofs : space.cell_dofs)
        for (int a : dofs)
            for (int b : dofs) rows[a].push_back(b);
    for (auto& r : rows) {
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
    }
    return rows;
}

} // namespace detail

inline FeSpace build_space(const TriangleMesh& mesh, int degree) {
    if (degree != 1 && degree != 2)
        throw std::invalid_argument("build_space: degree must be 1 or 2");
    FeSpace s;
    s.mesh = &mesh;
    s.degree = degree;
    s.dof_coords = mesh.vertices;
    s.is_boundary_dof.assign(mesh.boundary_vertex.begin(), mesh.boundary_vertex.end());

    s.cell_dofs.resize(mesh.triangle_count());
    for (int t = 0; t < mesh.triangle_count(); ++t)
        s.cell_dofs[t] = {mesh.triangles[t].v[0], mesh.triangles[t].v[1], mesh.triangles[t].v[2]};

    if (degree == 2) {
        auto inc = detail::edge_incidence(mesh);
        std::map<detail::EdgeKey, int> edge_dof;
        int next = mesh.vertex_count();
        for (const auto& [e, count] : inc) { // std::map iterates in sorted key order
            edge_dof[e] = next++;
            const Point2& p = mesh.vertices[e.first];
            const Point2& q = mesh.vertices[e.second];
            s.dof_coords.push_back({0.5 * (p.x + q.x), 0.5 * (p.y + q.y)});
            s.is_boundary_dof.push_back(count == 1 ? 1 : 0);
        }
        for (int t = 0; t < mesh.triangle_count(); ++t) {
            const auto& tr = mesh.triangles[t];
            s.cell_dofs[t].push_back(edge_dof[detail::edge_key(tr.v[0], tr.v[1])]);
            s.cell_dofs[t].push_back(edge_dof[detail::edge_key(tr.v[1], tr.v[2])]);
            s.cell_dofs[t].push_back(edge_dof[detail::edge_key(tr.v[2], tr.v[0])]);
        }
    }

    s.free_index.assign(s.dof_count(), -1);
    for (int d = 0; d < s.dof_count(); ++d) {
        if (s.is_boundary_dof[d]) {
            s.boundary_dofs.push_back(d);
        } else {
            s.free_index[d] = static_cast<int>(s.free_dofs.size());
            s.free_dofs.push_back(d);
        }
    }
    return s;
}

/// Evaluates U_h at a barycentric point of triangle t.
inline cplx evaluate(const FeSpace& space, const DofVector& u, int t, double l0, double l1,
                     double l2) {
    double phi[6];
    detail::eval_basis(space.degree, l0, l1, l2, phi, nullptr);
    cplx val{};
    const auto& dofs = space.cell_dofs[t];
    for (size_t i = 0; i < dofs.size(); ++i) val += u[dofs[i]] * phi[i];
    return val;
}

inline double evaluate_squared_modulus(const FeSpace& space, const DofVector& u, int t, double l0,
                                       double l1, double l2) {
    return std::norm(evaluate(space, u, t, l0, l1, l2));
}

/// Coefficient for weighted-mass assembly, sampled per quadrature point.
using WeightCoeff = std::function<double(int tri, int q, double x, double y)>;

inline SparseMatrixReal assemble_weighted_mass(const FeSpace& space, const WeightCoeff& coeff,
                                               const TriangleQuadrature& rule) {
    auto builder = make_builder(space.dof_count(), detail::sparsity_pattern(space));
    detail::BasisTable table(space.degree, rule);
    const int nloc = table.nloc;
    std::vector<double> local(nloc * nloc);
    for (int t = 0; t < space.mesh->triangle_count(); ++t) {
        detail::CellGeometry geom(*space.mesh, t);
        std::fill(local.begin(), local.end(), 0.0);
        for (size_t q = 0; q < rule.points.size(); ++q) {
            const auto& qp = rule.points[q];
            Point2 p = geom.map(qp.l0, qp.l1, qp.l2);
            double scale = qp.w * geom.jac * coeff(t, static_cast<int>(q), p.x, p.y);
            for (int i = 0; i < nloc; ++i)
                for (int j = 0; j < nloc; ++j)
                    local[i * nloc + j] += scale * table.phi[q][i] * table.phi[q][j];
        }
        const auto& dofs = space.cell_dofs[t];
        for (int i = 0; i < nloc; ++i)
            for (int j = 0; j < nloc; ++j)
                builder.add(dofs[i], dofs[j], local[i * nloc + j]);
    }
    return std::move(builder.m);
}

inline SparseMatrixReal assemble_mass(const FeSpace& space, const TriangleQuadrature& rule) {
    return assemble_weighted_mass(space, [](int, int, double, double) { return 1.0; }, rule);
}

inline SparseMatrixReal assemble_stiffness(const FeSpace& space, const TriangleQuadrature& rule) {
    auto builder = make_builder(space.dof_count(), detail::sparsity_pattern(space));
    detail::BasisTable table(space.degree, rule);
    const int nloc = table.nloc;
    std::vector<double> local(nloc * nloc);
    std::vector<std::array<double, 2>> gphys(nloc);
    for (int t = 0; t < space.mesh->triangle_count(); ++t) {
        detail::CellGeometry geom(*space.mesh, t);
        std::fill(local.begin(), local.end(), 0.0);
        for (size_t q = 0; q < rule.points.size(); ++q) {
            for (int i = 0; i < nloc; ++i) {
                const auto& g = table.gref[q][i];
                gphys[i] = {geom.inv_t[0][0] * g[0] + geom.inv_t[0][1] * g[1],
                            geom.inv_t[1][0] * g[0] + geom.inv_t[1][1] * g[1]};
            }
            double scale = rule.points[q].w * geom.jac;
            for (int i = 0; i < nloc; ++i)
                for (int j = 0; j < nloc; ++j)
                    local[i * nloc + j] +=
                        scale * (gphys[i][0] * gphys[j][0] + gphys[i][1] * gphys[j][1]);
        }
        const auto& dofs = space.cell_dofs[t];
        for (int i = 0; i < nloc; ++i)
            for (int j = 0; j < nloc; ++j)
                builder.add(dofs[i], dofs[j], local[i * nloc + j]);
    }
    return std::move(builder.m);
}

inline DofVector assemble_load(const FeSpace& space, const ScalarField& f,
                               const TriangleQuadrature& rule) {
    DofVector b(space.dof_count(), cplx{});
    detail::BasisTable table(space.degree, rule);
    const int nloc = table.nloc;
    for (int t = 0; t < space.mesh->triangle_count(); ++t) {
        detail::CellGeometry geom(*space.mesh, t);
        const auto& dofs = space.cell_dofs[t];
        for (size_t q = 0; q < rule.points.size(); ++q) {
            const auto& qp = rule.points[q];
            Point2 p = geom.map(qp.l0, qp.l1, qp.l2);
            cplx fv = f.value(p.x, p.y) * (qp.w * geom.jac);
            for (int i = 0; i < nloc; ++i) b[dofs[i]] += fv * table.phi[q][i];
        }
    }
    return b;
}

/// Load vector of the Ritz right-hand side: b_i = (grad f, grad phi_i).
inline DofVector assemble_gradient_load(const FeSpace& space, const ScalarField& f,
                                        const TriangleQuadrature& rule) {
    if (!f.has_gradient())
        throw std::invalid_argument("assemble_gradient_load: field lacks analytic gradient");
    DofVector b(space.dof_count(), cplx{});
    detail::BasisTable table(space.degree, rule);
    const int nloc = table.nloc;
    std::vector<std::array<double, 2>> gphys(nloc);
    for (int t = 0; t < space.mesh->triangle_count(); ++t) {
        detail::CellGeometry geom(*space.mesh, t);
        const auto& dofs = space.cell_dofs[t];
        for (size_t q = 0; q < rule.points.size(); ++q) {
            const auto& qp = rule.points[q];
            Point2 p = geom.map(qp.l0, qp.l1, qp.l2);
            Grad2 gf = f.gradient(p.x, p.y);
            double scale = qp.w * geom.jac;
            for (int i = 0; i < nloc; ++i) {
                const auto& g = table.gref[q][i];
                double gx = geom.inv_t[0][0] * g[0] + geom.inv_t[0][1] * g[1];
                double gy = geom.inv_t[1][0] * g[0] + geom.inv_t[1][1] * g[1];
                b[dofs[i]] += scale * (gf[0] * gx + gf[1] * gy);
            }
        }
    }
    return b;
}

inline DofVector interpolate(const FeSpace& space, const ScalarField& f) {
    DofVector u(space.dof_count());
    for (int d = 0; d < space.dof_count(); ++d)
        u[d] = f.value(space.dof_coords[d].x, space.dof_coords[d].y);
    return u;
}

/// Restricts a full vector to the free dofs.
inline CVector restrict_free(const FeSpace& space, const CVector& full) {
    CVector out(space.free_dofs.size());
    for (size_t i = 0; i < space.free_dofs.size(); ++i) out[i] = full[space.free_dofs[i]];
    return out;
}

/// Scatters free-dof values back; boundary entries are left untouched.
inline void scatter_free(const FeSpace& space, const CVector& free_vals, CVector& full) {
    for (size_t i = 0; i < space.free_dofs.size(); ++i) full[space.free_dofs[i]] = free_vals[i];
}

/// Ritz projection with nodal boundary lifting: boundary dofs take f's nodal
/// values, free dofs solve the stiffness system against (grad f, grad phi).
inline DofVector ritz_project_with(const FeSpace& space, const ScalarField& f,
                                   const SparseMatrixReal& stiffness,
                                   const TriangleQuadrature& rule, double tol = 1e-12) {
    DofVector u(space.dof_count(), cplx{});
    for (int d : space.boundary_dofs)
        u[d] = f.value(space.dof_coords[d].x, space.dof_coords[d].y);

    if (space.free_dofs.empty()) return u;

    DofVector b_full = assemble_gradient_load(space, f, rule);
    // move boundary coupling to the right-hand side
    CVector kx(space.dof_count());
    stiffness.multiply(u, kx);
    CVector rhs(space.free_dofs.size());
    for (size_t i = 0; i < space.free_dofs.size(); ++i) {
        int d = space.free_dofs[i];
        rhs[i] = b_full[d] - kx[d];
    }

    SparseMatrixReal k_ff = csr_submatrix(stiffness, space.free_dofs, space.free_index,
                                          static_cast<int>(space.free_dofs.size()));
    CompositeOperator op;
    op.beta = 1.0;
    op.K = &k_ff;
    CVector x0 = restrict_free(space, interpolate(space, f));
    auto [x, stats] = solve_bicgstab(op, rhs, x0, tol,
                                     10 * static_cast<int>(space.free_dofs.size()) + 50);
    scatter_free(space, x, u);
    return u;
}

inline DofVector ritz_project(const FeSpace& space, const ScalarField& f,
                              const TriangleQuadrature& rule, double tol = 1e-12) {
    return ritz_project_with(space, f, assemble_stiffness(space, rule), rule, tol);
}

inline double l2_error(const FeSpace& space, const DofVector& u, const ScalarField& exact,
                       const TriangleQuadrature& rule) {
    detail::BasisTable table(space.degree, rule);
    const int nloc = table.nloc;
    double total = 0.0;
    for (int t = 0; t < space.mesh->triangle_count(); ++t) {
        detail::CellGeometry geom(*space.mesh, t);
        const auto& dofs = space.cell_dofs[t];
        for (size_t q = 0; q < rule.points.size(); ++q) {
            const auto& qp = rule.points[q];
            Point2 p = geom.map(qp.l0, qp.l1, qp.l2);
            cplx uh{};
            for (int i = 0; i < nloc; ++i) uh += u[dofs[i]] * table.phi[q][i];
            total += qp.w * geom.jac * std::norm(uh - exact.value(p.x, p.y));
        }
    }
    return std::sqrt(total);
}

inline double h1_seminorm_error(const FeSpace& space, const DofVector& u, const ScalarField& exact,
                                const TriangleQuadrature& rule) {
    if (!exact.has_gradient())
        throw std::invalid_argument("h1_seminorm_error: field lacks analytic gradient");
    detail::BasisTable table(space.degree, rule);
    const int nloc = table.nloc;
    double total = 0.0;
    for (int t = 0; t < space.mesh->triangle_count(); ++t) {
        detail::CellGeometry geom(*space.mesh, t);
        const auto& dofs = space.cell_dofs[t];
        for (size_t q = 0; q < rule.points.size(); ++q) {
            const auto& qp = rule.points[q];
            Point2 p = geom.map(qp.l0, qp.l1, qp.l2);
            cplx gx{}, gy{};
            for (int i = 0; i < nloc; ++i) {
                const auto& g = table.gref[q][i];
                gx += u[dofs[i]] * (geom.inv_t[0][0] * g[0] + geom.inv_t[0][1] * g[1]);
                gy += u[dofs[i]] * (geom.inv_t[1][0] * g[0] + geom.inv_t[1][1] * g[1]);
            }
            Grad2 ge = exact.gradient(p.x, p.y);
            total += qp.w * geom.jac * (std::norm(gx - ge[0]) + std::norm(gy - ge[1]));
        }
    }
    return std::sqrt(total);
}

/// Coefficient |U_h|^2 + w for the per-step weighted mass. w may be null.
inline WeightCoeff squared_modulus_plus(const FeSpace& space, const DofVector& u,
                                        const TriangleQuadrature& rule,
                                        const ScalarField* w = nullptr) {
    auto table = std::make_shared<detail::BasisTable>(space.degree, rule);
    const ScalarField* wf = w;
    const FeSpace* sp = &space;
    const DofVector* up = &u;
    return [table, wf, sp, up](int t, int q, double x, double y) {
        cplx val{};
        const auto& dofs = sp->cell_dofs[t];
        for (size_t i = 0; i < dofs.size(); ++i) val += (*up)[dofs[i]] * table->phi[q][i];
        double c = std::norm(val);
        if (wf) c += wf->value(x, y).real();
        return c;
    };
}

} // namespace nlsw
