#include <catch2/catch_amalgamated.hpp>
#include <llfv/fvem.hpp>
#include <llfv/solver.hpp>
#include <random>

#include "oracles.hpp"

using namespace llfv;

namespace {

struct Setup {
    TriMesh mesh;
    DualGeometry dual;
    SparseMat mass;
    SparseMat stiffness;

    explicit Setup(int nx, int ny) : mesh(build_rect_mesh(nx, ny)), dual(build_dual(mesh)) {
        mass = assemble_mass(mesh, dual);
        stiffness = assemble_stiffness(mesh, dual);
    }

    LinearOperatorSpec spec(double shift, SolverBackend backend = SolverBackend::direct) const {
        LinearOperatorSpec s;
        s.mass = &mass;
        s.stiffness = &stiffness;
        s.shift = shift;
        s.dirichlet_nodes = mesh.boundary_nodes;
        s.backend = backend;
        return s;
    }
};

} // namespace

TEST_CASE("mass solve of a constant recovers the constant") {
    const Setup s(6, 5);
    const FactorizedOperator op = prepare(s.spec(0.0));
    const double c = 1.7;
    const Eigen::VectorXd rhs = s.mass * Eigen::VectorXd::Constant(s.mesh.node_count(), c);
    const Eigen::VectorXd bc = Eigen::VectorXd::Constant(s.mesh.node_count(), c);
    const Eigen::VectorXd x = op.solve(rhs, bc);
    CHECK((x.array() - c).abs().maxCoeff() < 1e-12);
}

TEST_CASE("solve recovers random fields applied through the operator") {
    std::mt19937_64 rng(71);
    for (const auto [nx, ny] : {std::pair{8, 8}, std::pair{13, 7}}) {
        const Setup s(nx, ny);
        const double shift = 0.02;
        const FactorizedOperator op = prepare(s.spec(shift));
        SparseMat full = s.mass;
        full += shift * s.stiffness;
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (int rep = 0; rep < 20; ++rep) {
            Eigen::VectorXd y(s.mesh.node_count());
            for (int i = 0; i < y.size(); ++i)
                y[i] = dist(rng);
            const Eigen::VectorXd rhs = full * y;
            const Eigen::VectorXd x = op.solve(rhs, y); // bc values taken from y itself
            CHECK((x - y).norm() <= 1e-10 * y.norm());
            // boundary entries are exact
            for (int i : s.mesh.boundary_nodes)
                CHECK(x[i] == y[i]);
        }
    }
}

TEST_CASE("iterative backend matches the direct backend") {
    const Setup s(10, 10);
    const double shift = 0.05;
    const FactorizedOperator direct = prepare(s.spec(shift, SolverBackend::direct));
    const FactorizedOperator krylov = prepare(s.spec(shift, SolverBackend::iterative));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::VectorXd rhs(s.mesh.node_count());
    for (int i = 0; i < rhs.size(); ++i)
        rhs[i] = dist(rng);
    const Eigen::VectorXd bc = Eigen::VectorXd::Zero(s.mesh.node_count());
    const Eigen::VectorXd xd = direct.solve(rhs, bc);
    const Eigen::VectorXd xk = krylov.solve(rhs, bc);
    CHECK((xd - xk).norm() <= 1e-8 * xd.norm());
}

TEST_CASE("solves are deterministic") {
    const Setup s(9, 9);
    const FactorizedOperator op = prepare(s.spec(0.01));
    Eigen::VectorXd rhs(s.mesh.node_count());
    for (int i = 0; i < rhs.size(); ++i)
        rhs[i] = std::sin(0.37 * i);
    const Eigen::VectorXd bc = Eigen::VectorXd::Zero(s.mesh.node_count());
    const Eigen::VectorXd x1 = op.solve(rhs, bc);
    const Eigen::VectorXd x2 = op.solve(rhs, bc);
    CHECK(std::memcmp(x1.data(), x2.data(), sizeof(double) * x1.size()) == 0);
}

TEST_CASE("implicit Euler heat marching converges at first order when dt = dx") {
    // u(x, y, t) = sin(pi x) sin(pi y) cos(t), zero Dirichlet data
    const double eps = 1.0;
    const auto exact = [](double x, double y, double t) {
        return std::sin(std::numbers::pi * x) * std::sin(std::numbers::pi * y) * std::cos(t);
    };
    const auto source = [&](double x, double y, double t) {
        const double space = std::sin(std::numbers::pi * x) * std::sin(std::numbers::pi * y);
        return -space * std::sin(t) + eps * 2.0 * std::numbers::pi * std::numbers::pi * space * std::cos(t);
    };

    double errs[2];
    const int sizes[2] = {16, 32};
    for (int k = 0; k < 2; ++k) {
        const int n = sizes[k];
        const double dx = 1.0 / n, dt = dx, t_end = 0.5;
        const long steps = std::lround(t_end / dt);
        const Setup s(n, n);
        const FactorizedOperator op = prepare(s.spec(dt * eps));
        Eigen::VectorXd u(s.mesh.node_count());
        for (int i = 0; i < u.size(); ++i)
            u[i] = exact(s.mesh.nodes[i].x(), s.mesh.nodes[i].y(), 0.0);
        const Eigen::VectorXd bc = Eigen::VectorXd::Zero(s.mesh.node_count());
        for (long step = 0; step < steps; ++step) {
            const double t1 = static_cast<double>(step + 1) * dt;
            Eigen::VectorXd rhs = s.mass * u;
            for (int i = 0; i < u.size(); ++i)
                rhs[i] += dt * s.dual.cv_area[i] * source(s.mesh.nodes[i].x(), s.mesh.nodes[i].y(), t1);
            u = op.solve(rhs, bc);
        }
        double err = 0.0;
        for (int i = 0; i < u.size(); ++i)
            err = std::max(err, std::abs(u[i] - exact(s.mesh.nodes[i].x(), s.mesh.nodes[i].y(),
                                                      static_cast<double>(steps) * dt)));
        errs[k] = err;
    }
    const double rate = std::log2(errs[0] / errs[1]);
    CHECK(rate > 0.7);
    CHECK(rate < 1.6);
}

TEST_CASE("prepare rejects bad specs and singular operators") {
    const Setup s(4, 4);
    LinearOperatorSpec bad = s.spec(-1.0);
    CHECK_THROWS_AS(prepare(bad), std::invalid_argument);

    LinearOperatorSpec missing;
    CHECK_THROWS_AS(prepare(missing), std::invalid_argument);

    // exactly singular: zero mass, pure stiffness with no constrained rows
    // (constants are in the nullspace)
    SparseMat zero(s.mesh.node_count(), s.mesh.node_count());
    LinearOperatorSpec singular;
    singular.mass = &zero;
    singular.stiffness = &s.stiffness;
    singular.shift = 1.0;
    CHECK_THROWS_AS(prepare(singular), std::runtime_error);
}

TEST_CASE("solve rejects bad right-hand sides") {
    const Setup s(4, 4);
    const FactorizedOperator op = prepare(s.spec(0.1));
    const Eigen::VectorXd bc = Eigen::VectorXd::Zero(s.mesh.node_count());
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s.mesh.node_count());
    rhs[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(op.solve(rhs, bc), std::invalid_argument);
    CHECK_THROWS_AS(op.solve(Eigen::VectorXd::Zero(3), bc), std::invalid_argument);
}
