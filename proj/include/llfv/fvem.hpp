#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "field.hpp"
#include "mesh.hpp"
#include "types.hpp"

namespace llfv {

namespace detail {

/// P1 shape-function gradients of one element (constant over the element).
struct ShapeGradients {
    std::array<Vec2, 3> grad;
    double area;
};

inline ShapeGradients shape_gradients(const TriMesh& mesh, int t) {
    const auto& tri = mesh.tris[t];
    const Vec2 a = mesh.nodes[tri[0]], b = mesh.nodes[tri[1]], c = mesh.nodes[tri[2]];
    const double s = signed_area(a, b, c);
    if (!(s > 0.0))
        throw std::runtime_error("shape_gradients: degenerate element " + std::to_string(t));
    const double inv2s = 1.0 / (2.0 * s);
    ShapeGradients g;
    g.area = s;
    g.grad[0] = Vec2(b.y() - c.y(), c.x() - b.x()) * inv2s;
    g.grad[1] = Vec2(c.y() - a.y(), a.x() - c.x()) * inv2s;
    g.grad[2] = Vec2(a.y() - b.y(), b.x() - a.x()) * inv2s;
    return g;
}

} // namespace detail

/// Per-triangle spatial gradient of each magnetization component: rows are
/// the three components, columns the x/y derivatives.
struct ElementGradients {
    std::vector<Eigen::Matrix<double, 3, 2>> grad;

    int size() const { return static_cast<int>(grad.size()); }
};

/// Constant per-element gradients from edge-midpoint differences: with
/// M_s the midpoint of edge (s, s+1),
///   d/dx = (1/S) sum_s u_s (y_{M_s} - y_{M_{s+2}}),
///   d/dy = (1/S) sum_s u_s (x_{M_{s+2}} - x_{M_s}),
/// which coincides with the P1 shape-function gradient.
inline ElementGradients element_gradients(const VectorField3& u, const TriMesh& mesh) {
    ElementGradients eg;
    eg.grad.resize(mesh.tris.size());
    for (int t = 0; t < mesh.tri_count(); ++t) {
        const auto& tri = mesh.tris[t];
        const Vec2 p0 = mesh.nodes[tri[0]], p1 = mesh.nodes[tri[1]], p2 = mesh.nodes[tri[2]];
        const double s = signed_area(p0, p1, p2);
        if (!(s > 0.0))
            throw std::runtime_error("element_gradients: degenerate element " + std::to_string(t));
        const std::array<Vec2, 3> mid = {0.5 * (p0 + p1), 0.5 * (p1 + p2), 0.5 * (p2 + p0)};
        Eigen::Matrix<double, 3, 2> g = Eigen::Matrix<double, 3, 2>::Zero();
        for (int k = 0; k < 3; ++k) {
            const Vec3 uv = u.node(tri[k]);
            const Vec2& ma = mid[k];
            const Vec2& mb = mid[(k + 2) % 3];
            g.col(0) += uv * (ma.y() - mb.y());
            g.col(1) += uv * (mb.x() - ma.x());
        }
        eg.grad[t] = g / s;
    }
    return eg;
}

/// FVEM mass pairing M*_{ij} = integral of basis phi_j over control volume
/// V_i. Assembled per triangle by exact integration of the linear integrand
/// over each vertex quadrilateral (P_s, M_s, Q, M_{s+2}): each quadrilateral
/// splits into two sub-triangles and the centroid rule is exact for linear
/// functions. Row sums equal the control-volume areas.
inline SparseMat assemble_mass(const TriMesh& mesh, const DualGeometry& dual) {
    const int n = mesh.node_count();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(mesh.tris.size() * 18);

    for (int t = 0; t < mesh.tri_count(); ++t) {
        const auto& tri = mesh.tris[t];
        const TriangleDual& td = dual.tri[t];
        const auto sg = detail::shape_gradients(mesh, t);
        const Vec2 p0 = mesh.nodes[tri[0]];

        // phi_j at a point: barycentric offset from vertex 0
        const auto basis = [&](const Vec2& x, int j) {
            const double base = (j == 0) ? 1.0 : 0.0;
            return base + sg.grad[j].dot(x - p0);
        };

        for (int s = 0; s < 3; ++s) {
            const Vec2 ps = mesh.nodes[tri[s]];
            const Vec2 ma = td.midpoint[s];
            const Vec2 mb = td.midpoint[(s + 2) % 3];
            const std::array<std::array<Vec2, 3>, 2> sub = {
                std::array<Vec2, 3>{ps, ma, td.barycenter},
                std::array<Vec2, 3>{ps, td.barycenter, mb}};
            for (const auto& st : sub) {
                const double a = signed_area(st[0], st[1], st[2]);
                const Vec2 centroid = (st[0] + st[1] + st[2]) / 3.0;
                for (int j = 0; j < 3; ++j)
                    trip.emplace_back(tri[s], tri[j], a * basis(centroid, j));
            }
        }
    }

    SparseMat m(n, n);
    m.setFromTriplets(trip.begin(), trip.end());
    m.prune(0.0, 0.0);
    return m;
}

/// Diagonal (lumped) mass diag(|V_i|); diagnostics only, the scheme uses the
/// exact nonsymmetric pairing above.
inline SparseMat assemble_mass_lumped(const DualGeometry& dual) {
    const int n = static_cast<int>(dual.cv_area.size());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(n);
    for (int i = 0; i < n; ++i)
        trip.emplace_back(i, i, dual.cv_area[i]);
    SparseMat m(n, n);
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

/// Mass pairing with a piecewise-constant element weight:
/// entry (i, j) = sum_K w_K * integral over V_i cap K of phi_j.
inline SparseMat assemble_weighted_mass(const TriMesh& mesh, const DualGeometry& dual,
                                        const std::vector<double>& element_weight) {
    if (element_weight.size() != mesh.tris.size())
        throw std::invalid_argument("assemble_weighted_mass: weight size mismatch");
    const int n = mesh.node_count();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(mesh.tris.size() * 18);

    for (int t = 0; t < mesh.tri_count(); ++t) {
        const auto& tri = mesh.tris[t];
        const TriangleDual& td = dual.tri[t];
        const auto sg = detail::shape_gradients(mesh, t);
        const Vec2 p0 = mesh.nodes[tri[0]];
        const double w = element_weight[t];
        const auto basis = [&](const Vec2& x, int j) {
            const double base = (j == 0) ? 1.0 : 0.0;
            return base + sg.grad[j].dot(x - p0);
        };
        for (int s = 0; s < 3; ++s) {
            const Vec2 ps = mesh.nodes[tri[s]];
            const Vec2 ma = td.midpoint[s];
            const Vec2 mb = td.midpoint[(s + 2) % 3];
            const std::array<std::array<Vec2, 3>, 2> sub = {
                std::array<Vec2, 3>{ps, ma, td.barycenter},
                std::array<Vec2, 3>{ps, td.barycenter, mb}};
            for (const auto& st : sub) {
                const double a = signed_area(st[0], st[1], st[2]);
                const Vec2 centroid = (st[0] + st[1] + st[2]) / 3.0;
                for (int j = 0; j < 3; ++j)
                    trip.emplace_back(tri[s], tri[j], w * a * basis(centroid, j));
            }
        }
    }

    SparseMat m(n, n);
    m.setFromTriplets(trip.begin(), trip.end());
    m.prune(0.0, 0.0);
    return m;
}

/// Coefficient-free FVEM stiffness: entry (i, j) = -sum over dual segments
/// bounding V_i of (grad phi_j . scaled outward normal). On the barycentric
/// dual this equals the P1 Galerkin stiffness matrix entrywise; diffusion
/// coefficients (alpha, eps, dt) are applied at use sites.
inline SparseMat assemble_stiffness(const TriMesh& mesh, const DualGeometry& dual) {
    const int n = mesh.node_count();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(mesh.tris.size() * 9);

    for (int t = 0; t < mesh.tri_count(); ++t) {
        const auto& tri = mesh.tris[t];
        const TriangleDual& td = dual.tri[t];
        const auto sg = detail::shape_gradients(mesh, t);
        for (int s = 0; s < 3; ++s) {
            const Vec2 nrm = vertex_chord_normal(td, s);
            for (int j = 0; j < 3; ++j)
                trip.emplace_back(tri[s], tri[j], -sg.grad[j].dot(nrm));
        }
    }

    SparseMat a(n, n);
    a.setFromTriplets(trip.begin(), trip.end());
    a.prune(0.0, 0.0);
    return a;
}

/// Residual of the trilinear cross-product form: per node,
///   r_i = sum over dual segments of V_i of Phi(Q) x (grad u|_K . scaled normal),
/// with Phi evaluated at the element barycenter (one-point quadrature). This
/// quadrature point makes the discrete skew identity <r, u> = 0 exact.
inline NodeVectors apply_bh(const VectorField3& phi, const VectorField3& u,
                            const TriMesh& mesh, const DualGeometry& dual) {
    NodeVectors r = NodeVectors::Zero(mesh.node_count(), 3);
    const ElementGradients eg = element_gradients(u, mesh);

    for (int t = 0; t < mesh.tri_count(); ++t) {
        const auto& tri = mesh.tris[t];
        const TriangleDual& td = dual.tri[t];
        const Vec3 phi_q = (phi.node(tri[0]) + phi.node(tri[1]) + phi.node(tri[2])) / 3.0;
        for (int s = 0; s < 3; ++s) {
            const Vec2 nrm = vertex_chord_normal(td, s);
            const Vec3 flux = eg.grad[t] * nrm;
            r.row(tri[s]) += phi_q.cross(flux).transpose();
        }
    }
    return r;
}

/// Matrix form of apply_bh(phi, .) on interleaved 3-vector unknowns. Every
/// contribution is a scalar multiple of the cross-product matrix of Phi(Q),
/// so u' B u = 0 for all u.
inline SparseMat assemble_bh_matrix(const VectorField3& phi, const TriMesh& mesh,
                                    const DualGeometry& dual) {
    const int n = mesh.node_count();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(mesh.tris.size() * 9 * 6);

    for (int t = 0; t < mesh.tri_count(); ++t) {
        const auto& tri = mesh.tris[t];
        const TriangleDual& td = dual.tri[t];
        const auto sg = detail::shape_gradients(mesh, t);
        const Vec3 p = (phi.node(tri[0]) + phi.node(tri[1]) + phi.node(tri[2])) / 3.0;
        for (int s = 0; s < 3; ++s) {
            const Vec2 nrm = vertex_chord_normal(td, s);
            for (int j = 0; j < 3; ++j) {
                const double c = sg.grad[j].dot(nrm);
                if (c == 0.0)
                    continue;
                const int row = 3 * tri[s], col = 3 * tri[j];
                // c * [p]_x blocks; the diagonal of the skew matrix is zero
                trip.emplace_back(row + 0, col + 1, -c * p.z());
                trip.emplace_back(row + 0, col + 2, c * p.y());
                trip.emplace_back(row + 1, col + 0, c * p.z());
                trip.emplace_back(row + 1, col + 2, -c * p.x());
                trip.emplace_back(row + 2, col + 0, -c * p.y());
                trip.emplace_back(row + 2, col + 1, c * p.x());
            }
        }
    }

    SparseMat b(3 * n, 3 * n);
    b.setFromTriplets(trip.begin(), trip.end());
    b.prune(0.0, 0.0);
    return b;
}

/// Lumped one-point quadrature of a nodal load: F_i = f(x_i) |V_i|.
inline NodeVectors nodal_rhs(const NodeVectors& f, const DualGeometry& dual) {
    if (f.rows() != dual.cv_area.size())
        throw std::invalid_argument("nodal_rhs: sample count mismatch");
    return dual.cv_area.asDiagonal() * f;
}

/// max over elements of the Frobenius norm of the 3x2 gradient
inline double grad_linf(const VectorField3& u, const TriMesh& mesh) {
    const ElementGradients eg = element_gradients(u, mesh);
    double m = 0.0;
    for (const auto& g : eg.grad)
        m = std::max(m, g.norm());
    return m;
}

/// sqrt( sum_K S_K |grad u|^2_K ); identical to the P1 Galerkin H1 seminorm.
inline double discrete_h1_seminorm(const VectorField3& u, const TriMesh& mesh) {
    const ElementGradients eg = element_gradients(u, mesh);
    double acc = 0.0;
    for (int t = 0; t < mesh.tri_count(); ++t)
        acc += triangle_area(mesh, t) * eg.grad[t].squaredNorm();
    return std::sqrt(acc);
}

/// Control-volume weighted nodal L2 norm.
inline double discrete_l2_norm(const VectorField3& u, const DualGeometry& dual) {
    double acc = 0.0;
    for (int i = 0; i < u.size(); ++i)
        acc += dual.cv_area[i] * u.values.row(i).squaredNorm();
    return std::sqrt(acc);
}

inline double discrete_h1_norm(const VectorField3& u, const TriMesh& mesh, const DualGeometry& dual) {
    const double l2 = discrete_l2_norm(u, dual);
    const double semi = discrete_h1_seminorm(u, mesh);
    return std::sqrt(l2 * l2 + semi * semi);
}

struct ErrorNorms {
    double linf = 0.0;
    double l2 = 0.0;
    double h1 = 0.0;
};

/// Nodal error norms against a closed-form field: L-inf is the maximum nodal
/// error magnitude, L2 the cv-area weighted nodal norm, and H1 adds the
/// discrete seminorm of the interpolated error.
inline ErrorNorms error_norms(const VectorField3& u,
                              const std::function<Vec3(double, double)>& exact,
                              const TriMesh& mesh, const DualGeometry& dual) {
    VectorField3 err = VectorField3::zero(mesh.node_count());
    double linf = 0.0;
    for (int i = 0; i < mesh.node_count(); ++i) {
        const Vec3 e = u.node(i) - exact(mesh.nodes[i].x(), mesh.nodes[i].y());
        err.set_node(i, e);
        linf = std::max(linf, e.norm());
    }
    ErrorNorms norms;
    norms.linf = linf;
    norms.l2 = discrete_l2_norm(err, dual);
    const double semi = discrete_h1_seminorm(err, mesh);
    norms.h1 = std::sqrt(norms.l2 * norms.l2 + semi * semi);
    return norms;
}

} // namespace llfv
