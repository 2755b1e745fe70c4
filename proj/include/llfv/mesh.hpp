#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "types.hpp"

namespace llfv {

struct Rect {
    double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }
};

inline Rect unit_square() { return Rect{0.0, 0.0, 1.0, 1.0}; }

/// Triangulation of a rectangle. Triangles are counterclockwise and have
/// strictly positive area; boundary_nodes are exactly the nodes on the
/// rectangle edges.
struct TriMesh {
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> tris;
    std::vector<int> boundary_nodes;   // ascending node indices
    std::vector<char> is_boundary;     // per-node flag
    double h_max = 0.0;                // maximum element diameter (longest edge)

    int node_count() const { return static_cast<int>(nodes.size()); }
    int tri_count() const { return static_cast<int>(tris.size()); }
};

inline double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

inline double triangle_area(const TriMesh& mesh, int t) {
    const auto& tri = mesh.tris[t];
    return signed_area(mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]);
}

/// Structured triangulation of `rect` with nx-by-ny cells, each split along
/// the lower-left to upper-right diagonal. Node ordering is row-major, so
/// the mesh (and everything derived from it) is deterministic.
inline TriMesh build_rect_mesh(int nx, int ny, const Rect& rect = unit_square()) {
    if (nx < 1 || ny < 1)
        throw std::invalid_argument("build_rect_mesh: subdivision counts must be >= 1");
    if (!(rect.width() > 0.0) || !(rect.height() > 0.0))
        throw std::invalid_argument("build_rect_mesh: degenerate rectangle");

    TriMesh mesh;
    const int npx = nx + 1, npy = ny + 1;
    mesh.nodes.reserve(static_cast<size_t>(npx) * npy);
    mesh.is_boundary.assign(static_cast<size_t>(npx) * npy, 0);

    for (int j = 0; j < npy; ++j) {
        for (int i = 0; i < npx; ++i) {
            const double x = rect.x0 + rect.width() * (static_cast<double>(i) / nx);
            const double y = rect.y0 + rect.height() * (static_cast<double>(j) / ny);
            mesh.nodes.emplace_back(x, y);
            if (i == 0 || j == 0 || i == nx || j == ny) {
                mesh.is_boundary[static_cast<size_t>(j) * npx + i] = 1;
                mesh.boundary_nodes.push_back(j * npx + i);
            }
        }
    }

    const auto vid = [npx](int i, int j) { return j * npx + i; };
    mesh.tris.reserve(2 * static_cast<size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int v00 = vid(i, j), v10 = vid(i + 1, j);
            const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
            mesh.tris.push_back({v00, v10, v11});
            mesh.tris.push_back({v00, v11, v01});
        }
    }

    for (int t = 0; t < mesh.tri_count(); ++t) {
        if (!(triangle_area(mesh, t) > 0.0))
            throw std::logic_error("build_rect_mesh: non-positive triangle area");
        const auto& tri = mesh.tris[t];
        for (int e = 0; e < 3; ++e) {
            const Vec2 d = mesh.nodes[tri[(e + 1) % 3]] - mesh.nodes[tri[e]];
            mesh.h_max = std::max(mesh.h_max, d.norm());
        }
    }
    return mesh;
}

/// One interior dual segment of the barycentric dual mesh: it runs from an
/// edge midpoint to the triangle barycenter. `normal` is scaled by the
/// segment length and points out of the control volume of `node`; the
/// opposite side uses the negated normal.
struct DualSegment {
    int node = -1;
    Vec2 normal = Vec2::Zero();
};

struct TriangleDual {
    Vec2 barycenter = Vec2::Zero();
    std::array<Vec2, 3> midpoint{};       // midpoint[s] lies on edge (s, s+1)
    std::array<DualSegment, 3> segment{}; // segment[s] joins midpoint[s] to the barycenter
    double area = 0.0;
};

/// Barycentric-dual geometry: per-node control-volume areas plus the
/// per-triangle dual segments needed for FVEM flux integrals.
struct DualGeometry {
    Eigen::VectorXd cv_area;
    std::vector<TriangleDual> tri;

    double domain_area() const { return cv_area.sum(); }
};

/// Net outward normal (scaled by length) of the dual boundary separating the
/// corner of local vertex `s` from the rest of the triangle. For piecewise
/// constant gradients the flux through the polyline M_s -> Q -> M_{s+2}
/// depends only on its endpoints, so the two segments collapse to one chord.
inline Vec2 vertex_chord_normal(const TriangleDual& td, int s) {
    return td.segment[s].normal - td.segment[(s + 2) % 3].normal;
}

inline DualGeometry build_dual(const TriMesh& mesh) {
    DualGeometry dual;
    dual.cv_area = Eigen::VectorXd::Zero(mesh.node_count());
    dual.tri.resize(mesh.tris.size());

    const auto rot = [](const Vec2& v) { return Vec2(v.y(), -v.x()); };

    for (int t = 0; t < mesh.tri_count(); ++t) {
        const auto& tri = mesh.tris[t];
        const Vec2 p0 = mesh.nodes[tri[0]], p1 = mesh.nodes[tri[1]], p2 = mesh.nodes[tri[2]];
        TriangleDual& td = dual.tri[t];
        td.area = signed_area(p0, p1, p2);
        td.barycenter = (p0 + p1 + p2) / 3.0;
        td.midpoint = {0.5 * (p0 + p1), 0.5 * (p1 + p2), 0.5 * (p2 + p0)};
        for (int s = 0; s < 3; ++s) {
            // Right-of-travel normal for midpoint -> barycenter, which points
            // out of the control volume of vertex s (CCW orientation).
            td.segment[s].node = tri[s];
            td.segment[s].normal = rot(td.barycenter - td.midpoint[s]);
            dual.cv_area[tri[s]] += td.area / 3.0;
        }
    }
    return dual;
}

} // namespace llfv
