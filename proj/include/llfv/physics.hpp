#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "field.hpp"
#include "fvem.hpp"
#include "mesh.hpp"

namespace llfv {

/// SI material data for a thin ferromagnetic film.
struct MaterialParams {
    double Ms = 8.0e5;                         // saturation magnetization, A/m
    double A_ex = 1.3e-11;                     // exchange constant, J/m
    double Ku = 0.0;                           // uniaxial anisotropy constant, J/m^3
    double mu0 = 4.0e-7 * std::numbers::pi;    // vacuum permeability, T m/A
    double gamma = 1.76086e11;                 // gyromagnetic ratio, rad s^-1 T^-1
    double alpha = 1.0;                        // damping, dimensionless
    double L = 1.0e-6;                         // length scale of the domain, m

    void validate() const {
        if (!(Ms > 0.0 && A_ex > 0.0 && mu0 > 0.0 && gamma > 0.0 && alpha > 0.0 && L > 0.0) ||
            !(Ku >= 0.0))
            throw std::invalid_argument("MaterialParams: values out of range");
    }
};

enum class EasyAxis { e1, e3 };

/// Dimensionless model parameters. The lower-order effective field is
///   fhat(m) = -q (m2 e2 + m3 e3) - m3 e3 + h_e           (easy axis e1)
///   fhat(m) = -q (m1 e1 + m2 e2) - m3 e3 + h_e           (easy axis e3)
/// with the -m3 e3 stray-field term (thin-film limit) present only when
/// stray_field is set. The exchange coefficient eps multiplies the stiffness
/// operator; simplified-equation runs use eps = 1, q = 0, h_e = 0 and the
/// stray term switched off.
struct DimensionlessParams {
    double eps = 1.0;
    double q = 0.0;
    double alpha = 0.1;
    Vec3 h_e = Vec3::Zero();
    EasyAxis axis = EasyAxis::e1;
    bool stray_field = true;
    double time_unit = 0.0; // seconds per dimensionless time unit (0: not SI-derived)
};

inline DimensionlessParams nondimensionalize(const MaterialParams& p) {
    p.validate();
    DimensionlessParams d;
    d.eps = 2.0 * p.A_ex / (p.mu0 * p.Ms * p.Ms * p.L * p.L);
    d.q = 2.0 * p.Ku / (p.mu0 * p.Ms * p.Ms);
    d.alpha = p.alpha;
    d.time_unit = 1.0 / (p.mu0 * p.gamma * p.Ms);
    d.stray_field = true;
    return d;
}

/// Pointwise evaluation of the lower-order field fhat at every node.
inline NodeVectors effective_field_loworder(const VectorField3& m, const DimensionlessParams& cfg) {
    NodeVectors f(m.size(), 3);
    const double s = cfg.stray_field ? 1.0 : 0.0;
    for (int i = 0; i < m.size(); ++i) {
        const Vec3 v = m.node(i);
        Vec3 out = cfg.h_e;
        if (cfg.axis == EasyAxis::e1) {
            out.y() -= cfg.q * v.y();
            out.z() -= cfg.q * v.z();
        } else {
            out.x() -= cfg.q * v.x();
            out.y() -= cfg.q * v.y();
        }
        out.z() -= s * v.z();
        f.row(i) = out.transpose();
    }
    return f;
}

struct DiscreteEnergy {
    double total = 0.0;
    double exchange = 0.0;
    double anisotropy = 0.0;
    double zeeman = 0.0;
    double stray = 0.0;
};

/// Discrete magnetic free energy: (eps/2) |||m|||_h^2 plus the lower-order
/// densities integrated by lumped nodal quadrature (consistent with
/// nodal_rhs, which keeps the discrete dissipation check self-consistent).
inline DiscreteEnergy energy(const VectorField3& m, const DimensionlessParams& cfg,
                             const TriMesh& mesh, const DualGeometry& dual) {
    DiscreteEnergy e;
    const double semi = discrete_h1_seminorm(m, mesh);
    e.exchange = 0.5 * cfg.eps * semi * semi;
    for (int i = 0; i < m.size(); ++i) {
        const Vec3 v = m.node(i);
        const double w = dual.cv_area[i];
        const double aniso = (cfg.axis == EasyAxis::e1) ? v.y() * v.y() + v.z() * v.z()
                                                        : v.x() * v.x() + v.y() * v.y();
        e.anisotropy += w * 0.5 * cfg.q * aniso;
        e.zeeman -= w * cfg.h_e.dot(v);
        if (cfg.stray_field)
            e.stray += w * 0.5 * v.z() * v.z();
    }
    e.total = e.exchange + e.anisotropy + e.zeeman + e.stray;
    return e;
}

/// Unit-norm closed-form field used by the accuracy and energy experiments.
inline Vec3 manufactured_solution(double x, double y, double t) {
    return Vec3(std::sin(x) * std::cos(y + t), std::cos(x) * std::cos(y + t), std::sin(y + t));
}

inline Vec3 manufactured_time_derivative(double x, double y, double t) {
    return Vec3(-std::sin(x) * std::sin(y + t), -std::cos(x) * std::sin(y + t), std::cos(y + t));
}

// Componentwise: lap m1 = -2 m1, lap m2 = -2 m2, lap m3 = -m3.
inline Vec3 manufactured_laplacian(double x, double y, double t) {
    const Vec3 m = manufactured_solution(x, y, t);
    return Vec3(-2.0 * m.x(), -2.0 * m.y(), -m.z());
}

/// Source that makes the manufactured field solve
/// m_t = -m x lap m - alpha m x (m x lap m) + f.
inline Vec3 manufactured_source(double x, double y, double t, double alpha) {
    const Vec3 m = manufactured_solution(x, y, t);
    const Vec3 lap = manufactured_laplacian(x, y, t);
    const Vec3 mt = manufactured_time_derivative(x, y, t);
    return mt + m.cross(lap) + alpha * m.cross(m.cross(lap));
}

/// Piecewise initial condition that drives finite-time blow-up; `center`
/// shifts the profile. Unit norm on both branches; the branch boundary
/// |x - center| = 0.5 takes the constant branch.
inline Vec3 blowup_ic(const Vec2& x, const Vec2& center = Vec2::Zero()) {
    const Vec2 r = x - center;
    const double d2 = r.squaredNorm();
    if (d2 >= 0.25)
        return Vec3(0.0, 0.0, -1.0);
    const double a = std::pow(1.0 - 2.0 * d2, 4);
    const double denom = a * a + d2;
    return Vec3(2.0 * r.x() * a / denom, 2.0 * r.y() * a / denom, (a * a - d2) / denom);
}

} // namespace llfv
