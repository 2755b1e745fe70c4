#pragma once

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fvem.hpp"
#include "physics.hpp"
#include "solver.hpp"

namespace llfv {

/// Dirichlet data g(x, y, t); must be unit norm.
using BoundaryFn = std::function<Vec3(double, double, double)>;
/// Extra forcing f(x, y, t) for manufactured-solution runs.
using SourceFn = std::function<Vec3(double, double, double)>;

/// Pointwise Gauss-Seidel update, split per component: each cross/damping
/// term uses the freshest values available. mh1 feeds the mh2 formula, mh1
/// and mh2 feed mh3; g1 and g2 are the refreshed heat solves seeded by the
/// already-updated first and second components.
inline double gs_update_m1(const Vec3& m, const Vec3& ms, double alpha) {
    return m.x() - (m.y() * ms.z() - m.z() * ms.y()) -
           alpha * (m.x() * ms.x() + m.y() * ms.y() + m.z() * ms.z()) * m.x() + alpha * ms.x();
}

inline double gs_update_m2(const Vec3& m, const Vec3& ms, double mh1, double g1, double alpha) {
    return m.y() - (m.z() * g1 - mh1 * ms.z()) -
           alpha * (mh1 * g1 + m.y() * ms.y() + m.z() * ms.z()) * m.y() + alpha * ms.y();
}

inline double gs_update_m3(const Vec3& m, const Vec3& ms, double mh1, double mh2, double g1,
                           double g2, double alpha) {
    return m.z() - (mh1 * g2 - mh2 * g1) -
           alpha * (mh1 * g1 + mh2 * g2 + m.z() * ms.z()) * m.z() + alpha * ms.z();
}

inline Vec3 gauss_seidel_update(const Vec3& m, const Vec3& ms, double g1, double g2, double alpha) {
    Vec3 mh;
    mh.x() = gs_update_m1(m, ms, alpha);
    mh.y() = gs_update_m2(m, ms, mh.x(), g1, alpha);
    mh.z() = gs_update_m3(m, ms, mh.x(), mh.y(), g1, g2, alpha);
    return mh;
}

/// Nodewise normalization onto the unit sphere; idempotent.
inline VectorField3 project(const VectorField3& m_hat) {
    VectorField3 out = m_hat;
    for (int i = 0; i < out.size(); ++i) {
        const double len = out.values.row(i).norm();
        if (!(len > 0.0) || !std::isfinite(len))
            throw std::runtime_error("project: zero or non-finite magnitude at node " + std::to_string(i));
        out.values.row(i) /= len;
    }
    return out;
}

/// Operators shared by every step of one GSPM run at fixed dt: the exact
/// FVEM mass pairing and one factorization of M* + dt*eps*A serving all
/// five heat solves per step.
struct GspmOperators {
    const TriMesh* mesh = nullptr;
    const DualGeometry* dual = nullptr;
    SparseMat mass;
    FactorizedOperator heat;
    double dt = 0.0;
};

inline GspmOperators prepare_gspm_operators(const TriMesh& mesh, const DualGeometry& dual,
                                            const DimensionlessParams& cfg, double dt,
                                            SolverBackend backend = SolverBackend::direct) {
    if (!(dt > 0.0))
        throw std::invalid_argument("prepare_gspm_operators: dt must be positive");
    GspmOperators ops;
    ops.mesh = &mesh;
    ops.dual = &dual;
    ops.dt = dt;
    ops.mass = assemble_mass(mesh, dual);
    const SparseMat stiffness = assemble_stiffness(mesh, dual);
    LinearOperatorSpec spec;
    spec.mass = &ops.mass;
    spec.stiffness = &stiffness;
    spec.shift = dt * cfg.eps;
    spec.dirichlet_nodes = mesh.boundary_nodes;
    spec.backend = backend;
    ops.heat = prepare(spec);
    return ops;
}

/// Intermediate data of one GSPM step; exposed for diagnostics.
struct GspmWorkspace {
    VectorField3 m_star;
    Eigen::VectorXd g1, g2;
    VectorField3 m_hat;
    double dt = 0.0;
};

/// One GSPM step m^n -> m^{n+1}:
///   1. three heat solves (M* + dt eps A) m_i* = M* m_i^n + dt F_i(fhat(m^n)),
///   2. the pointwise Gauss-Seidel update, interleaved with the two
///      refreshed heat solves: m_hat_1 everywhere, then g_1 seeded by
///      m_hat_1 with forcing fhat_1(m*), then m_hat_2, then g_2 seeded by
///      m_hat_2, then m_hat_3,
///   3. optional source added as dt * f(x, t_n),
///   4. Dirichlet data g(t_{n+1}) on boundary nodes,
///   5. projection onto the unit sphere.
/// Seeding g_i with the updated component (rather than m_i^n) is what keeps
/// the cross terms of the update consistent; Dirichlet data at t_{n+1} is
/// imposed on every intermediate solve.
inline VectorField3 gspm_step(const VectorField3& m_n, double t_n, const DimensionlessParams& cfg,
                              const GspmOperators& ops, const BoundaryFn& bc,
                              const SourceFn& source = {}, GspmWorkspace* workspace = nullptr) {
    const TriMesh& mesh = *ops.mesh;
    const DualGeometry& dual = *ops.dual;
    const int n = m_n.size();
    if (n != mesh.node_count())
        throw std::invalid_argument("gspm_step: field size mismatch");
    const double dt = ops.dt;
    const double t_next = t_n + dt;

    NodeVectors g_next = NodeVectors::Zero(n, 3);
    for (int i : mesh.boundary_nodes) {
        const Vec2& x = mesh.nodes[i];
        g_next.row(i) = bc(x.x(), x.y(), t_next).transpose();
    }

    const NodeVectors fhat_n = effective_field_loworder(m_n, cfg);
    VectorField3 m_star = VectorField3::zero(n);
    for (int c = 0; c < 3; ++c) {
        const Eigen::VectorXd rhs =
            ops.mass * m_n.values.col(c) + dt * dual.cv_area.cwiseProduct(fhat_n.col(c));
        m_star.values.col(c) = ops.heat.solve(rhs, g_next.col(c));
    }
    const NodeVectors fhat_star = effective_field_loworder(m_star, cfg);

    Eigen::VectorXd mh1(n);
    for (int i = 0; i < n; ++i)
        mh1[i] = gs_update_m1(m_n.node(i), m_star.node(i), cfg.alpha);
    for (int i : mesh.boundary_nodes)
        mh1[i] = g_next(i, 0);
    const Eigen::VectorXd g1 =
        ops.heat.solve(ops.mass * mh1 + dt * dual.cv_area.cwiseProduct(fhat_star.col(0)),
                       g_next.col(0));

    Eigen::VectorXd mh2(n);
    for (int i = 0; i < n; ++i)
        mh2[i] = gs_update_m2(m_n.node(i), m_star.node(i), mh1[i], g1[i], cfg.alpha);
    for (int i : mesh.boundary_nodes)
        mh2[i] = g_next(i, 1);
    const Eigen::VectorXd g2 =
        ops.heat.solve(ops.mass * mh2 + dt * dual.cv_area.cwiseProduct(fhat_star.col(1)),
                       g_next.col(1));

    VectorField3 m_hat = VectorField3::zero(n);
    for (int i = 0; i < n; ++i) {
        const Vec3 m = m_n.node(i);
        const Vec3 ms = m_star.node(i);
        m_hat.set_node(i, Vec3(mh1[i], mh2[i],
                               gs_update_m3(m, ms, mh1[i], mh2[i], g1[i], g2[i], cfg.alpha)));
    }

    if (source) {
        for (int i = 0; i < n; ++i) {
            const Vec2& x = mesh.nodes[i];
            m_hat.values.row(i) += dt * source(x.x(), x.y(), t_n).transpose();
        }
    }

    for (int i : mesh.boundary_nodes)
        m_hat.values.row(i) = g_next.row(i);

    if (workspace) {
        workspace->m_star = m_star;
        workspace->g1 = g1;
        workspace->g2 = g2;
        workspace->m_hat = m_hat;
        workspace->dt = dt;
    }

    // Normalize interior nodes; boundary nodes keep the prescribed data,
    // which is unit norm by contract.
    VectorField3 out = std::move(m_hat);
    for (int i = 0; i < n; ++i) {
        const double len = out.values.row(i).norm();
        if (!std::isfinite(len))
            throw std::runtime_error("gspm_step: non-finite value at node " + std::to_string(i));
        if (mesh.is_boundary[static_cast<size_t>(i)])
            continue;
        if (!(len > 0.0))
            throw std::runtime_error("gspm_step: zero magnitude at node " + std::to_string(i) +
                                     " before projection");
        out.values.row(i) /= len;
    }
    return out;
}

/// Fixed-point iteration state for the linearized implicit stepper.
struct PicardState {
    VectorField3 iterate;
    double increment_h1 = 0.0;
    double tol = 1e-10;
    int max_iters = 50;
};

struct PicardNoConvergence : std::runtime_error {
    std::vector<double> trace;
    explicit PicardNoConvergence(std::vector<double> tr)
        : std::runtime_error("picard_implicit_step: no convergence after " +
                             std::to_string(tr.size()) + " iterations"),
          trace(std::move(tr)) {}
};

struct PicardOperators {
    const TriMesh* mesh = nullptr;
    const DualGeometry* dual = nullptr;
    SparseMat mass;
    SparseMat stiffness;
};

inline PicardOperators prepare_picard_operators(const TriMesh& mesh, const DualGeometry& dual) {
    PicardOperators ops;
    ops.mesh = &mesh;
    ops.dual = &dual;
    ops.mass = assemble_mass(mesh, dual);
    ops.stiffness = assemble_stiffness(mesh, dual);
    return ops;
}

namespace detail {

/// Expand an N x N scalar operator to 3N x 3N acting identically on each
/// component of interleaved 3-vector unknowns.
inline SparseMat expand3(const SparseMat& a) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(a.nonZeros()) * 3);
    for (int r = 0; r < a.outerSize(); ++r)
        for (SparseMat::InnerIterator it(a, r); it; ++it)
            for (int c = 0; c < 3; ++c)
                trip.emplace_back(3 * it.row() + c, 3 * it.col() + c, it.value());
    SparseMat out(3 * a.rows(), 3 * a.cols());
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

} // namespace detail

/// One backward-Euler step of the linearized implicit scheme, solved by
/// fixed-point iteration: each pass solves
///   [(1/tau) M* + alpha A + B(m^l) - alpha W(m^l)] m^{l+1} = (1/tau) M* m^n
/// with B the cross-product flux operator and W the |grad m^l|^2-weighted
/// mass form, and stops once the discrete H1 norm of the increment
/// w^l = m^{l+1} - m^l drops below tol. Returns the step result and the
/// per-iteration increment norms.
inline std::pair<VectorField3, std::vector<double>> picard_implicit_step(
    const VectorField3& m_n, double t_n, double tau, const DimensionlessParams& cfg,
    const PicardOperators& ops, const BoundaryFn& bc, PicardState& state) {
    const TriMesh& mesh = *ops.mesh;
    const DualGeometry& dual = *ops.dual;
    const int n = m_n.size();
    const int n3 = 3 * n;
    if (!(tau > 0.0))
        throw std::invalid_argument("picard_implicit_step: tau must be positive");

    const double t_next = t_n + tau;
    std::vector<char> constrained(static_cast<size_t>(n3), 0);
    Eigen::VectorXd bc_rows = Eigen::VectorXd::Zero(n3);
    for (int i : mesh.boundary_nodes) {
        const Vec2& x = mesh.nodes[i];
        const Vec3 g = bc(x.x(), x.y(), t_next);
        for (int c = 0; c < 3; ++c) {
            constrained[static_cast<size_t>(3 * i + c)] = 1;
            bc_rows[3 * i + c] = g[c];
        }
    }

    const SparseMat mass3 = detail::expand3(ops.mass);
    const SparseMat base3 = (1.0 / tau) * mass3 + cfg.alpha * detail::expand3(ops.stiffness);

    Eigen::VectorXd rhs(n3);
    {
        NodeVectors mm(n, 3);
        for (int c = 0; c < 3; ++c)
            mm.col(c) = ops.mass * m_n.values.col(c);
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < 3; ++c)
                rhs[3 * i + c] = mm(i, c) / tau;
    }
    for (int r = 0; r < n3; ++r)
        if (constrained[static_cast<size_t>(r)])
            rhs[r] = bc_rows[r];

    state.iterate = m_n;
    std::vector<double> trace;
    trace.reserve(static_cast<size_t>(state.max_iters));

    for (int l = 0; l < state.max_iters; ++l) {
        const SparseMat b = assemble_bh_matrix(state.iterate, mesh, dual);
        const ElementGradients eg = element_gradients(state.iterate, mesh);
        std::vector<double> weight(mesh.tris.size());
        for (int t = 0; t < mesh.tri_count(); ++t)
            weight[static_cast<size_t>(t)] = eg.grad[t].squaredNorm();
        const SparseMat w3 = detail::expand3(assemble_weighted_mass(mesh, dual, weight));

        SparseMat system = base3 + b - cfg.alpha * w3;
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(static_cast<size_t>(system.nonZeros()));
        for (int r = 0; r < system.outerSize(); ++r) {
            if (constrained[static_cast<size_t>(r)]) {
                trip.emplace_back(r, r, 1.0);
                continue;
            }
            for (SparseMat::InnerIterator it(system, r); it; ++it)
                trip.emplace_back(it.row(), it.col(), it.value());
        }
        detail::ColMajorMat sys(n3, n3);
        sys.setFromTriplets(trip.begin(), trip.end());

        Eigen::SparseLU<detail::ColMajorMat> lu;
        lu.compute(sys);
        if (lu.info() != Eigen::Success)
            throw std::runtime_error("picard_implicit_step: factorization failed");
        const Eigen::VectorXd x = lu.solve(rhs);
        if (lu.info() != Eigen::Success)
            throw std::runtime_error("picard_implicit_step: solve failed");

        VectorField3 next = VectorField3::zero(n);
        for (int i = 0; i < n; ++i)
            next.set_node(i, Vec3(x[3 * i], x[3 * i + 1], x[3 * i + 2]));

        VectorField3 w = VectorField3::zero(n);
        w.values = next.values - state.iterate.values;
        const double inc = discrete_h1_norm(w, mesh, dual);
        trace.push_back(inc);
        state.iterate = next;
        state.increment_h1 = inc;
        if (inc < state.tol)
            return {std::move(next), std::move(trace)};
    }
    throw PicardNoConvergence(std::move(trace));
}

} // namespace llfv
