// Test-only reference implementations, kept independent of the library's
// assembly paths: Galerkin matrices from the classic coefficient formulas,
// high-order quadrature, polygon areas, an RK4 reference for the pointwise
// magnetization ODE, and finite-difference derivatives.
#pragma once

#include <llfv/llfv.hpp>
#include <random>
#include <vector>

namespace oracle {

using llfv::SparseMat;
using llfv::TriMesh;
using llfv::Vec2;
using llfv::Vec3;

// P1 Galerkin stiffness via b/c coefficient differences.
inline SparseMat galerkin_stiffness(const TriMesh& mesh) {
    std::vector<Eigen::Triplet<double>> trip;
    for (const auto& tri : mesh.tris) {
        const Vec2 p[3] = {mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]};
        const double twoS = (p[1].x() - p[0].x()) * (p[2].y() - p[0].y()) -
                            (p[2].x() - p[0].x()) * (p[1].y() - p[0].y());
        double b[3], c[3];
        for (int i = 0; i < 3; ++i) {
            const int j = (i + 1) % 3, k = (i + 2) % 3;
            b[i] = p[j].y() - p[k].y();
            c[i] = p[k].x() - p[j].x();
        }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                trip.emplace_back(tri[i], tri[j], (b[i] * b[j] + c[i] * c[j]) / (2.0 * twoS));
    }
    SparseMat k(mesh.node_count(), mesh.node_count());
    k.setFromTriplets(trip.begin(), trip.end());
    return k;
}

// Consistent P1 Galerkin mass, S/12 * [[2,1,1],[1,2,1],[1,1,2]].
inline SparseMat galerkin_mass(const TriMesh& mesh) {
    std::vector<Eigen::Triplet<double>> trip;
    for (int t = 0; t < mesh.tri_count(); ++t) {
        const auto& tri = mesh.tris[t];
        const double s = llfv::triangle_area(mesh, t);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                trip.emplace_back(tri[i], tri[j], s / 12.0 * (i == j ? 2.0 : 1.0));
    }
    SparseMat m(mesh.node_count(), mesh.node_count());
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

// Degree-5 seven-point triangle rule.
inline double integrate_triangle(const Vec2& a, const Vec2& b, const Vec2& c,
                                 const std::function<double(const Vec2&)>& f) {
    static const double w0 = 9.0 / 40.0;
    static const double wa = (155.0 - std::sqrt(15.0)) / 1200.0;
    static const double wb = (155.0 + std::sqrt(15.0)) / 1200.0;
    static const double ga = (6.0 - std::sqrt(15.0)) / 21.0;
    static const double gb = (6.0 + std::sqrt(15.0)) / 21.0;
    struct Pt {
        double l1, l2, w;
    };
    static const Pt pts[7] = {
        {1.0 / 3.0, 1.0 / 3.0, w0},          {ga, ga, wa},      {1.0 - 2.0 * ga, ga, wa},
        {ga, 1.0 - 2.0 * ga, wa},            {gb, gb, wb},      {1.0 - 2.0 * gb, gb, wb},
        {gb, 1.0 - 2.0 * gb, wb}};
    const double area = llfv::signed_area(a, b, c);
    double acc = 0.0;
    for (const auto& p : pts) {
        const Vec2 x = p.l1 * a + p.l2 * b + (1.0 - p.l1 - p.l2) * c;
        acc += p.w * f(x);
    }
    return area * acc; // weights sum to 1
}

// Quadrilateral integral by splitting along one diagonal.
inline double integrate_quad(const std::array<Vec2, 4>& q,
                             const std::function<double(const Vec2&)>& f) {
    return integrate_triangle(q[0], q[1], q[2], f) + integrate_triangle(q[0], q[2], q[3], f);
}

inline double shoelace_area(const std::vector<Vec2>& poly) {
    // work relative to the first vertex so offsets far from the origin do
    // not wash out the area digits
    double acc = 0.0;
    for (size_t i = 0; i < poly.size(); ++i) {
        const Vec2 a = poly[i] - poly[0];
        const Vec2 b = poly[(i + 1) % poly.size()] - poly[0];
        acc += a.x() * b.y() - b.x() * a.y();
    }
    return 0.5 * acc;
}

// Barycentric evaluation of the hat function of local vertex j.
inline double hat(const TriMesh& mesh, int t, int j, const Vec2& x) {
    const auto& tri = mesh.tris[t];
    const Vec2 a = mesh.nodes[tri[0]], b = mesh.nodes[tri[1]], c = mesh.nodes[tri[2]];
    const double s = llfv::signed_area(a, b, c);
    const Vec2 p[3] = {a, b, c};
    const int j1 = (j + 1) % 3, j2 = (j + 2) % 3;
    return llfv::signed_area(p[j1], p[j2], x) / s;
}

// Reference solution of dm/dt = -m x h - alpha m x (m x h) with constant h,
// integrated by RK4 with many substeps.
inline Vec3 ode_reference(const Vec3& m0, const Vec3& h, double alpha, double t, int substeps = 20000) {
    const auto rhs = [&](const Vec3& m) { return (-m.cross(h) - alpha * m.cross(m.cross(h))).eval(); };
    Vec3 m = m0;
    const double dt = t / substeps;
    for (int k = 0; k < substeps; ++k) {
        const Vec3 k1 = rhs(m);
        const Vec3 k2 = rhs(m + 0.5 * dt * k1);
        const Vec3 k3 = rhs(m + 0.5 * dt * k2);
        const Vec3 k4 = rhs(m + dt * k3);
        m += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return m;
}

// Central finite differences of a scalar function of (x, y, t).
template <typename F>
double fd2(const F& f, double x, double y, double t, int dim) {
    const double h = 1e-4;
    if (dim == 0)
        return (f(x + h, y, t) - 2.0 * f(x, y, t) + f(x - h, y, t)) / (h * h);
    return (f(x, y + h, t) - 2.0 * f(x, y, t) + f(x, y - h, t)) / (h * h);
}

template <typename F>
double fd1_t(const F& f, double x, double y, double t) {
    const double h = 1e-6;
    return (f(x, y, t + h) - f(x, y, t - h)) / (2.0 * h);
}

inline llfv::VectorField3 random_field(int n, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    llfv::VectorField3 f = llfv::VectorField3::zero(n);
    for (int i = 0; i < n; ++i)
        f.set_node(i, Vec3(dist(rng), dist(rng), dist(rng)));
    return f;
}

inline llfv::TriMesh random_mesh(std::mt19937_64& rng, int max_n = 9) {
    std::uniform_int_distribution<int> ni(1, max_n);
    std::uniform_real_distribution<double> corner(-2.0, 2.0);
    std::uniform_real_distribution<double> extent(0.3, 3.0);
    const double x0 = corner(rng), y0 = corner(rng);
    return llfv::build_rect_mesh(ni(rng), ni(rng), llfv::Rect{x0, y0, x0 + extent(rng), y0 + extent(rng)});
}

} // namespace oracle
