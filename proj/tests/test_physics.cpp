#include <catch2/catch_amalgamated.hpp>
#include <llfv/physics.hpp>
#include <random>

#include "oracles.hpp"

using namespace llfv;

TEST_CASE("nondimensionalization of SI material data") {
    MaterialParams p;
    p.Ms = 8.0e5;
    p.A_ex = 1.3e-11;
    p.Ku = 500.0;
    p.L = 1.0e-6;
    p.alpha = 1.0;
    const DimensionlessParams d = nondimensionalize(p);

    const double mu0 = 4.0e-7 * std::numbers::pi;
    CHECK(d.eps == Catch::Approx(2.0 * 1.3e-11 / (mu0 * 8.0e5 * 8.0e5 * 1e-12)).epsilon(1e-14));
    CHECK(d.eps == Catch::Approx(3.23e-5).epsilon(2e-3));
    CHECK(d.q == Catch::Approx(2.0 * 500.0 / (mu0 * 8.0e5 * 8.0e5)).epsilon(1e-14));
    CHECK(d.q == Catch::Approx(1.24e-3).epsilon(2e-3));
    CHECK(d.time_unit == Catch::Approx(5.65e-12).epsilon(2e-3)); // about 5.65 ps
    CHECK(1e-12 / d.time_unit == Catch::Approx(0.177).epsilon(2e-3));

    p.Ku = 0.0;
    CHECK(nondimensionalize(p).q == 0.0);

    // eps depends on Ms, L only through mu0 Ms^2 L^2
    MaterialParams scaled = p;
    scaled.Ms *= 2.0;
    scaled.L *= 0.5;
    CHECK(nondimensionalize(scaled).eps == Catch::Approx(nondimensionalize(p).eps).epsilon(1e-13));

    MaterialParams bad = p;
    bad.Ms = 0.0;
    CHECK_THROWS_AS(nondimensionalize(bad), std::invalid_argument);
}

TEST_CASE("lower-order effective field") {
    DimensionlessParams cfg;
    cfg.q = 0.0;
    cfg.h_e = Vec3::Zero();
    cfg.stray_field = true;

    VectorField3 m = VectorField3::constant(1, Vec3(1, 0, 0));
    CHECK(effective_field_loworder(m, cfg).row(0).norm() == 0.0);

    m = VectorField3::constant(1, Vec3(0, 0, 1));
    CHECK((effective_field_loworder(m, cfg).row(0).transpose() - Vec3(0, 0, -1)).norm() == 0.0);

    cfg.q = 2.0;
    cfg.h_e = Vec3(0, 0, 3);
    m = VectorField3::constant(1, Vec3(0, 1, 0));
    CHECK((effective_field_loworder(m, cfg).row(0).transpose() - Vec3(0, -2, 3)).norm() == 0.0);

    // easy axis along e3 penalizes the in-plane components instead
    cfg.axis = EasyAxis::e3;
    cfg.h_e = Vec3::Zero();
    m = VectorField3::constant(1, Vec3(1, 0, 0));
    CHECK((effective_field_loworder(m, cfg).row(0).transpose() - Vec3(-2, 0, 0)).norm() == 0.0);
}

TEST_CASE("discrete energy on uniform states") {
    const TriMesh mesh = build_rect_mesh(6, 6);
    const DualGeometry dual = build_dual(mesh);

    DimensionlessParams cfg;
    cfg.eps = 1.0;
    cfg.q = 0.8;
    cfg.h_e = Vec3::Zero();
    cfg.stray_field = true;
    const DiscreteEnergy zero =
        energy(VectorField3::constant(mesh.node_count(), Vec3(1, 0, 0)), cfg, mesh, dual);
    CHECK(zero.total == 0.0);

    cfg.q = 0.0;
    const DiscreteEnergy stray =
        energy(VectorField3::constant(mesh.node_count(), Vec3(0, 0, 1)), cfg, mesh, dual);
    CHECK(stray.total == Catch::Approx(0.5).epsilon(1e-12));
    CHECK(stray.stray == Catch::Approx(0.5).epsilon(1e-12));
    CHECK(stray.exchange == 0.0);
}

TEST_CASE("discrete energy parts sum to the total and converge to the continuum value") {
    DimensionlessParams cfg;
    cfg.eps = 1.0;
    cfg.q = 0.7;
    cfg.h_e = Vec3(0.1, 0.2, -0.3);
    cfg.stray_field = true;

    // closed-form continuum energy of the static manufactured field on [0,1]^2:
    // |grad m|^2 = 1 + cos^2 y, int cos^2 over [0,1] is (1 + sin(1)cos(1))/2
    const double c2 = 0.5 + std::sin(2.0) / 4.0;
    const double s2 = 0.5 - std::sin(2.0) / 4.0;
    const double exchange = 0.5 * (1.0 + c2);
    const double aniso = 0.5 * cfg.q * (c2 * c2 + s2);
    const double zeeman = -(cfg.h_e.x() * (1.0 - std::cos(1.0)) * std::sin(1.0) +
                            cfg.h_e.y() * std::sin(1.0) * std::sin(1.0) +
                            cfg.h_e.z() * (1.0 - std::cos(1.0)));
    const double stray = 0.5 * s2;
    const double continuum = exchange + aniso + zeeman + stray;

    double errs[2];
    const int sizes[2] = {32, 64};
    for (int k = 0; k < 2; ++k) {
        const TriMesh mesh = build_rect_mesh(sizes[k], sizes[k]);
        const DualGeometry dual = build_dual(mesh);
        const VectorField3 m = VectorField3::sample(
            mesh, [](double x, double y) { return manufactured_solution(x, y, 0.0); });
        const DiscreteEnergy e = energy(m, cfg, mesh, dual);
        CHECK(e.total == Catch::Approx(e.exchange + e.anisotropy + e.zeeman + e.stray).margin(1e-13));
        CHECK(e.exchange >= 0.0);
        CHECK(e.stray >= 0.0);
        errs[k] = std::abs(e.total - continuum) / std::abs(continuum);
    }
    CHECK(errs[1] < 0.01);
    CHECK(errs[1] < errs[0]);
}

TEST_CASE("manufactured solution is unit norm and satisfies the forced equation") {
    CHECK((manufactured_solution(0, 0, 0) - Vec3(0, 1, 0)).norm() == 0.0);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int rep = 0; rep < 50; ++rep) {
        const double x = dist(rng), y = dist(rng), t = dist(rng);
        CHECK(std::abs(manufactured_solution(x, y, t).norm() - 1.0) < 1e-15);
    }

    // validate the hand-derived Laplacian and time derivative against
    // finite differences, then the source against the assembled residual
    const double alpha = 0.37;
    for (int rep = 0; rep < 20; ++rep) {
        const double x = dist(rng), y = dist(rng), t = dist(rng);
        for (int c = 0; c < 3; ++c) {
            const auto comp = [c](double xx, double yy, double tt) {
                return manufactured_solution(xx, yy, tt)[c];
            };
            const double lap_fd = oracle::fd2(comp, x, y, t, 0) + oracle::fd2(comp, x, y, t, 1);
            CHECK(manufactured_laplacian(x, y, t)[c] == Catch::Approx(lap_fd).margin(5e-7));
            const double dt_fd = oracle::fd1_t(comp, x, y, t);
            CHECK(manufactured_time_derivative(x, y, t)[c] == Catch::Approx(dt_fd).margin(5e-9));
        }
        const Vec3 m = manufactured_solution(x, y, t);
        const Vec3 lap = manufactured_laplacian(x, y, t);
        const Vec3 residual = manufactured_time_derivative(x, y, t) + m.cross(lap) +
                              alpha * m.cross(m.cross(lap)) - manufactured_source(x, y, t, alpha);
        CHECK(residual.norm() < 1e-12);
    }
}

TEST_CASE("blow-up initial condition") {
    CHECK((blowup_ic(Vec2(0, 0)) - Vec3(0, 0, 1)).norm() == 0.0);
    CHECK((blowup_ic(Vec2(0.5, 0)) - Vec3(0, 0, -1)).norm() == 0.0); // branch boundary
    CHECK((blowup_ic(Vec2(0.7, 0)) - Vec3(0, 0, -1)).norm() == 0.0);

    // just inside the branch boundary the inner formula gives m3 near -63/65
    const Vec3 inner = blowup_ic(Vec2(0.5 - 1e-9, 0.0));
    CHECK(inner.z() == Catch::Approx(-63.0 / 65.0).epsilon(1e-6));

    // shifted center
    const Vec2 c(0.5, 0.5);
    CHECK((blowup_ic(c, c) - Vec3(0, 0, 1)).norm() == 0.0);

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> dist(-0.8, 0.8);
    for (int rep = 0; rep < 100; ++rep) {
        const Vec2 x(dist(rng), dist(rng));
        CHECK(std::abs(blowup_ic(x).norm() - 1.0) < 1e-14);
    }
}
