#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "io.hpp"
#include "physics.hpp"
#include "stepper.hpp"

namespace llfv {

enum class ExperimentKind { convergence, energy, blowup, micromag, picard_check };

/// Declarative description of one experiment run.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::convergence;

    int nx = 0, ny = 0;
    Rect rect;
    double dt = 0.0, T = 0.0;
    DimensionlessParams params;
    std::optional<MaterialParams> material;

    std::string bc_family = "manufactured-moving";
    std::string ic_name = "manufactured";
    Vec2 blowup_center = Vec2::Zero();

    std::string out_dir = ".";
    std::vector<double> snapshot_times; // dimensionless
    int sample_every = 1;

    // convergence sweep
    std::string mode = "linked"; // linked: dt = dx; quadratic: dt = dx^2
    std::vector<int> resolutions;

    // picard-check
    double tau = 1e-3;
    double picard_tol = 1e-11;
    int picard_max_iters = 40;

    std::string scenario; // micromag
    std::uint64_t seed = 0;
    SolverBackend backend = SolverBackend::direct;

    void validate() const {
        if (kind != ExperimentKind::convergence && kind != ExperimentKind::picard_check) {
            if (!(dt > 0.0) || !(T >= dt))
                throw std::invalid_argument("ExperimentConfig: need dt > 0 and T >= dt");
            if (nx < 1 || ny < 1)
                throw std::invalid_argument("ExperimentConfig: mesh counts must be >= 1");
        }
    }
};

struct ErrorTableRow {
    double dt = 0.0, dx = 0.0;
    double linf = 0.0, linf_order = 0.0;
    double l2 = 0.0, l2_order = 0.0;
    double h1 = 0.0, h1_order = 0.0;
};

struct RunArtifacts {
    struct SeriesRow {
        double t = 0.0;
        double total = 0.0, exchange = 0.0, anisotropy = 0.0, zeeman = 0.0, stray = 0.0;
        double grad_linf = 0.0;
    };

    std::vector<ErrorTableRow> error_table;
    std::vector<SeriesRow> timeseries;
    std::vector<std::string> snapshots;
    std::vector<double> picard_taus;
    std::vector<std::vector<double>> picard_traces;
    VectorField3 final_field;
};

// ---------------------------------------------------------------------------
// boundary and initial data

inline BoundaryFn make_boundary_fn(const std::string& family,
                                   const std::function<Vec3(double, double)>& ic, const Rect& rect) {
    if (family == "fixed-from-ic") {
        if (!ic)
            throw ConfigError("fixed-from-ic requires a pointwise initial condition");
        return [ic](double x, double y, double) { return ic(x, y); };
    }
    if (family == "manufactured-static")
        return [](double x, double y, double) { return manufactured_solution(x, y, 0.0); };
    if (family == "manufactured-moving")
        return [](double x, double y, double t) { return manufactured_solution(x, y, t); };
    if (family == "vortex-frame") {
        // Edge precedence at corners: left, right, bottom, top.
        const double tol = 1e-9 * std::max(rect.width(), rect.height());
        return [rect, tol](double x, double y, double) {
            if (x <= rect.x0 + tol)
                return Vec3(0, 1, 0);
            if (x >= rect.x1 - tol)
                return Vec3(0, -1, 0);
            if (y <= rect.y0 + tol)
                return Vec3(-1, 0, 0);
            return Vec3(1, 0, 0);
        };
    }
    throw ConfigError("unknown bc family: " + family);
}

/// Pointwise closure of the named initial condition; empty for the seeded
/// random preset (which only exists as a per-node table).
inline std::function<Vec3(double, double)> make_ic_closure(const ExperimentConfig& cfg) {
    if (cfg.ic_name == "manufactured")
        return [](double x, double y) { return manufactured_solution(x, y, 0.0); };
    if (cfg.ic_name == "blowup") {
        const Vec2 c = cfg.blowup_center;
        return [c](double x, double y) { return blowup_ic(Vec2(x, y), c); };
    }
    if (cfg.ic_name == "uniform-e1")
        return [](double, double) { return Vec3(1, 0, 0); };
    if (cfg.ic_name == "uniform-e3")
        return [](double, double) { return Vec3(0, 0, 1); };
    if (cfg.ic_name == "four-domain") {
        const Rect r = cfg.rect;
        return [r](double x, double y) {
            const double dl = x - r.x0, dr = r.x1 - x, db = y - r.y0, dtp = r.y1 - y;
            const double dmin = std::min(std::min(dl, dr), std::min(db, dtp));
            if (dl == dmin)
                return Vec3(0, 1, 0);
            if (dr == dmin)
                return Vec3(0, -1, 0);
            if (db == dmin)
                return Vec3(-1, 0, 0);
            return Vec3(1, 0, 0);
        };
    }
    if (cfg.ic_name == "random")
        return {};
    throw ConfigError("unknown ic: " + cfg.ic_name);
}

inline VectorField3 make_initial_field(const ExperimentConfig& cfg, const TriMesh& mesh,
                                       const BoundaryFn& bc) {
    VectorField3 m;
    if (const auto ic = make_ic_closure(cfg)) {
        m = VectorField3::sample(mesh, ic);
    } else {
        std::mt19937_64 rng(cfg.seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        m = VectorField3::zero(mesh.node_count());
        for (int i = 0; i < mesh.node_count(); ++i) {
            Vec3 v;
            do {
                v = Vec3(gauss(rng), gauss(rng), gauss(rng));
            } while (v.norm() < 1e-8);
            m.set_node(i, v.normalized());
        }
    }
    for (int i : mesh.boundary_nodes)
        m.set_node(i, bc(mesh.nodes[i].x(), mesh.nodes[i].y(), 0.0));
    return m;
}

// ---------------------------------------------------------------------------
// CSV emission

namespace detail {

inline std::string cell(double v) { return fmt("%.12e", v); }

inline void write_error_table(const std::string& path, const std::vector<ErrorTableRow>& rows) {
    std::vector<std::vector<std::string>> cells;
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const auto order = [&](double o) { return i == 0 ? std::string() : fmt("%.4f", o); };
        cells.push_back({cell(r.dt), cell(r.dx), cell(r.linf), order(r.linf_order), cell(r.l2),
                         order(r.l2_order), cell(r.h1), order(r.h1_order)});
    }
    write_csv(path, {"dt", "dx", "linf", "linf_order", "l2", "l2_order", "h1", "h1_order"}, cells);
}

inline void write_timeseries(const std::string& path, const std::vector<RunArtifacts::SeriesRow>& rows,
                             double seconds_per_unit = 0.0) {
    std::vector<std::string> header = {"t", "energy_total", "energy_exchange", "energy_anisotropy",
                                       "energy_zeeman", "energy_stray", "grad_linf"};
    if (seconds_per_unit > 0.0)
        header.insert(header.begin() + 1, "t_ps");
    std::vector<std::vector<std::string>> cells;
    for (const auto& r : rows) {
        std::vector<std::string> row = {cell(r.t),      cell(r.total), cell(r.exchange),
                                        cell(r.anisotropy), cell(r.zeeman), cell(r.stray),
                                        cell(r.grad_linf)};
        if (seconds_per_unit > 0.0)
            row.insert(row.begin() + 1, cell(r.t * seconds_per_unit * 1e12));
        cells.push_back(std::move(row));
    }
    write_csv(path, header, cells);
}

inline void write_picard_trace(const std::string& path, const std::vector<double>& taus,
                               const std::vector<std::vector<double>>& traces) {
    std::vector<std::vector<std::string>> cells;
    for (size_t k = 0; k < taus.size(); ++k) {
        for (size_t l = 0; l < traces[k].size(); ++l) {
            std::vector<std::string> row = {cell(taus[k]), std::to_string(l), cell(traces[k][l])};
            row.push_back(l == 0 ? std::string() : cell(traces[k][l] / traces[k][l - 1]));
            cells.push_back(std::move(row));
        }
    }
    write_csv(path, {"tau", "iteration", "increment_h1", "ratio"}, cells);
}

inline std::string snapshot_path(const std::string& dir, size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "snapshot_%03zu.vtk", index);
    return (std::filesystem::path(dir) / buf).string();
}

} // namespace detail

// ---------------------------------------------------------------------------
// shared time loop

namespace detail {

struct LoopOutput {
    std::vector<RunArtifacts::SeriesRow> series;
    std::vector<std::string> snapshots;
    VectorField3 final_field;
};

inline RunArtifacts::SeriesRow series_row(double t, const VectorField3& m,
                                          const DimensionlessParams& params, const TriMesh& mesh,
                                          const DualGeometry& dual) {
    const DiscreteEnergy e = energy(m, params, mesh, dual);
    RunArtifacts::SeriesRow row;
    row.t = t;
    row.total = e.total;
    row.exchange = e.exchange;
    row.anisotropy = e.anisotropy;
    row.zeeman = e.zeeman;
    row.stray = e.stray;
    row.grad_linf = grad_linf(m, mesh);
    return row;
}

/// March from t = 0 to T = steps * dt, sampling the energy series and
/// emitting VTK snapshots at the requested times (rounded to steps).
inline LoopOutput run_time_loop(const ExperimentConfig& cfg, const TriMesh& mesh,
                                const DualGeometry& dual, const BoundaryFn& bc,
                                const SourceFn& source, VectorField3 m, long steps) {
    std::filesystem::create_directories(cfg.out_dir);
    const GspmOperators ops = prepare_gspm_operators(mesh, dual, cfg.params, cfg.dt, cfg.backend);

    std::vector<long> snap_step(cfg.snapshot_times.size());
    for (size_t k = 0; k < cfg.snapshot_times.size(); ++k)
        snap_step[k] = std::min<long>(steps, std::max<long>(0, std::lround(cfg.snapshot_times[k] / cfg.dt)));

    LoopOutput out;
    const auto emit = [&](long step, const VectorField3& field) {
        for (size_t k = 0; k < snap_step.size(); ++k) {
            if (snap_step[k] != step)
                continue;
            const std::string path = snapshot_path(cfg.out_dir, k);
            write_vtk_snapshot(mesh, field, path);
            out.snapshots.push_back(path);
        }
    };

    out.series.push_back(series_row(0.0, m, cfg.params, mesh, dual));
    emit(0, m);
    for (long k = 0; k < steps; ++k) {
        const double t_n = static_cast<double>(k) * cfg.dt;
        m = gspm_step(m, t_n, cfg.params, ops, bc, source);
        const long done = k + 1;
        if (done % cfg.sample_every == 0 || done == steps)
            out.series.push_back(series_row(static_cast<double>(done) * cfg.dt, m, cfg.params, mesh, dual));
        emit(done, m);
    }
    out.final_field = std::move(m);
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// drivers

/// Observed order between successive rows: log of the error ratio over the
/// log of the spatial step ratio. Using the spatial step also covers the
/// quadratic mode, whose dt sequence is not uniformly halved.
inline void fill_observed_orders(std::vector<ErrorTableRow>& rows) {
    for (size_t i = 1; i < rows.size(); ++i) {
        auto& cur = rows[i];
        const auto& prev = rows[i - 1];
        const double ratio = std::log(prev.dx / cur.dx);
        cur.linf_order = std::log(prev.linf / cur.linf) / ratio;
        cur.l2_order = std::log(prev.l2 / cur.l2) / ratio;
        cur.h1_order = std::log(prev.h1 / cur.h1) / ratio;
    }
}

/// Manufactured-solution convergence sweep; emits errors.csv.
inline RunArtifacts run_convergence(const ExperimentConfig& cfg) {
    if (cfg.resolutions.empty())
        throw std::invalid_argument("run_convergence: no resolutions");
    std::filesystem::create_directories(cfg.out_dir);
    RunArtifacts art;

    const double alpha = cfg.params.alpha;
    for (int n : cfg.resolutions) {
        const double dx = 1.0 / n;
        const double dt = (cfg.mode == "quadratic") ? dx * dx : dx;
        const long steps = std::lround(cfg.T / dt);
        const double t_end = static_cast<double>(steps) * dt;

        const TriMesh mesh = build_rect_mesh(n, n, unit_square());
        const DualGeometry dual = build_dual(mesh);
        ExperimentConfig local = cfg;
        local.dt = dt;
        const GspmOperators ops = prepare_gspm_operators(mesh, dual, cfg.params, dt, cfg.backend);
        const BoundaryFn bc = make_boundary_fn("manufactured-moving", {}, unit_square());
        const SourceFn source = [alpha](double x, double y, double t) {
            return manufactured_source(x, y, t, alpha);
        };

        VectorField3 m =
            VectorField3::sample(mesh, [](double x, double y) { return manufactured_solution(x, y, 0.0); });
        for (long k = 0; k < steps; ++k)
            m = gspm_step(m, static_cast<double>(k) * dt, cfg.params, ops, bc, source);

        const ErrorNorms e = error_norms(
            m, [t_end](double x, double y) { return manufactured_solution(x, y, t_end); }, mesh, dual);
        ErrorTableRow row;
        row.dt = dt;
        row.dx = dx;
        row.linf = e.linf;
        row.l2 = e.l2;
        row.h1 = e.h1;
        art.error_table.push_back(row);
        art.final_field = std::move(m);
    }

    fill_observed_orders(art.error_table);

    detail::write_error_table((std::filesystem::path(cfg.out_dir) / "errors.csv").string(),
                              art.error_table);
    return art;
}

/// Energy time series under a static or moving Dirichlet family; emits
/// energy.csv.
inline RunArtifacts run_energy(const ExperimentConfig& cfg) {
    cfg.validate();
    const TriMesh mesh = build_rect_mesh(cfg.nx, cfg.ny, cfg.rect);
    const DualGeometry dual = build_dual(mesh);
    const BoundaryFn bc = make_boundary_fn(cfg.bc_family, make_ic_closure(cfg), cfg.rect);
    const VectorField3 m0 = make_initial_field(cfg, mesh, bc);
    const long steps = std::lround(cfg.T / cfg.dt);

    auto out = detail::run_time_loop(cfg, mesh, dual, bc, {}, m0, steps);
    RunArtifacts art;
    art.timeseries = std::move(out.series);
    art.snapshots = std::move(out.snapshots);
    art.final_field = std::move(out.final_field);
    detail::write_timeseries((std::filesystem::path(cfg.out_dir) / "energy.csv").string(),
                             art.timeseries);
    return art;
}

/// Blow-up run: fixed Dirichlet data from the initial condition, energy and
/// gradient monitors, snapshots at the configured times.
inline RunArtifacts run_blowup(const ExperimentConfig& cfg) {
    cfg.validate();
    const TriMesh mesh = build_rect_mesh(cfg.nx, cfg.ny, cfg.rect);
    const DualGeometry dual = build_dual(mesh);
    const BoundaryFn bc = make_boundary_fn("fixed-from-ic", make_ic_closure(cfg), cfg.rect);
    const VectorField3 m0 = make_initial_field(cfg, mesh, bc);
    const long steps = std::lround(cfg.T / cfg.dt);

    auto out = detail::run_time_loop(cfg, mesh, dual, bc, {}, m0, steps);
    RunArtifacts art;
    art.timeseries = std::move(out.series);
    art.snapshots = std::move(out.snapshots);
    art.final_field = std::move(out.final_field);
    detail::write_timeseries((std::filesystem::path(cfg.out_dir) / "series.csv").string(),
                             art.timeseries);
    return art;
}

/// Micromagnetics scenario with SI inputs converted through the
/// nondimensionalization; emits series.csv (with a picosecond column) and
/// snapshots.
inline RunArtifacts run_micromag(const ExperimentConfig& cfg) {
    if (!cfg.material.has_value())
        throw std::invalid_argument("run_micromag: material parameters required");
    cfg.validate();
    const TriMesh mesh = build_rect_mesh(cfg.nx, cfg.ny, cfg.rect);
    const DualGeometry dual = build_dual(mesh);
    const BoundaryFn bc = make_boundary_fn(cfg.bc_family, make_ic_closure(cfg), cfg.rect);
    const VectorField3 m0 = make_initial_field(cfg, mesh, bc);
    const long steps = std::lround(cfg.T / cfg.dt);

    auto out = detail::run_time_loop(cfg, mesh, dual, bc, {}, m0, steps);
    RunArtifacts art;
    art.timeseries = std::move(out.series);
    art.snapshots = std::move(out.snapshots);
    art.final_field = std::move(out.final_field);
    detail::write_timeseries((std::filesystem::path(cfg.out_dir) / "series.csv").string(),
                             art.timeseries, cfg.params.time_unit);
    return art;
}

/// Contraction study of the fixed-point implicit stepper at tau and tau/2;
/// emits trace.csv with per-iteration increments and ratios.
inline RunArtifacts run_picard_check(const ExperimentConfig& cfg) {
    const int n = cfg.nx > 0 ? cfg.nx : 32;
    const TriMesh mesh = build_rect_mesh(n, n, unit_square());
    const DualGeometry dual = build_dual(mesh);
    const PicardOperators pops = prepare_picard_operators(mesh, dual);
    const BoundaryFn bc = make_boundary_fn("manufactured-static", {}, unit_square());
    const VectorField3 m0 =
        VectorField3::sample(mesh, [](double x, double y) { return manufactured_solution(x, y, 0.0); });

    RunArtifacts art;
    for (const double tau : {cfg.tau, 0.5 * cfg.tau}) {
        PicardState state;
        state.tol = cfg.picard_tol;
        state.max_iters = cfg.picard_max_iters;
        auto [m, trace] = picard_implicit_step(m0, 0.0, tau, cfg.params, pops, bc, state);
        art.picard_taus.push_back(tau);
        art.picard_traces.push_back(std::move(trace));
        art.final_field = std::move(m);
    }
    std::filesystem::create_directories(cfg.out_dir);
    detail::write_picard_trace((std::filesystem::path(cfg.out_dir) / "trace.csv").string(),
                               art.picard_taus, art.picard_traces);
    return art;
}

// ---------------------------------------------------------------------------
// config translation

namespace detail {

inline DimensionlessParams simplified_params(double alpha) {
    DimensionlessParams p;
    p.eps = 1.0;
    p.q = 0.0;
    p.alpha = alpha;
    p.h_e = Vec3::Zero();
    p.stray_field = false;
    return p;
}

inline SolverBackend backend_from(const Config& c) {
    const std::string b = c.get("solver", "direct");
    if (b == "direct")
        return SolverBackend::direct;
    if (b == "iterative")
        return SolverBackend::iterative;
    throw ConfigError("unknown solver backend: " + b);
}

} // namespace detail

inline ExperimentConfig convergence_config(const Config& c) {
    c.restrict_keys({"experiment", "alpha", "mode", "resolutions", "T", "out", "solver", "seed"});
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::convergence;
    cfg.mode = c.get("mode", "linked");
    if (cfg.mode != "linked" && cfg.mode != "quadratic")
        throw ConfigError("convergence: mode must be linked or quadratic");
    cfg.resolutions = c.get_int_list("resolutions", cfg.mode == "linked"
                                                        ? std::vector<int>{32, 64, 128, 256}
                                                        : std::vector<int>{8, 16, 24, 32});
    cfg.T = c.get_double("T", 1.0);
    cfg.params = detail::simplified_params(c.get_double("alpha", 0.1));
    cfg.out_dir = c.get("out", "out-convergence");
    cfg.backend = detail::backend_from(c);
    return cfg;
}

inline ExperimentConfig energy_config(const Config& c) {
    c.restrict_keys({"experiment", "nx", "ny", "dt", "T", "alpha", "bc", "out", "solver", "seed",
                     "sample_every"});
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::energy;
    cfg.nx = c.get_int("nx", 5);
    cfg.ny = c.get_int("ny", 5);
    cfg.rect = unit_square();
    cfg.dt = c.get_double("dt", 0.1);
    cfg.T = c.get_double("T", 10.0);
    cfg.params = detail::simplified_params(c.get_double("alpha", 0.1));
    cfg.bc_family = c.get("bc", "manufactured-static");
    cfg.ic_name = "manufactured";
    cfg.sample_every = c.get_int("sample_every", 1);
    cfg.out_dir = c.get("out", "out-energy");
    cfg.backend = detail::backend_from(c);
    return cfg;
}

inline ExperimentConfig blowup_config(const Config& c) {
    c.restrict_keys({"experiment", "n", "dt", "T", "alpha", "snapshots", "sample_every", "out",
                     "solver", "seed"});
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::blowup;
    const int n = c.get_int("n", 64);
    cfg.nx = cfg.ny = n;
    cfg.rect = Rect{-0.5, -0.5, 0.5, 0.5};
    cfg.dt = c.get_double("dt", 1e-4);
    cfg.T = c.get_double("T", 0.6);
    cfg.params = detail::simplified_params(c.get_double("alpha", 1.0));
    cfg.ic_name = "blowup";
    cfg.blowup_center = Vec2::Zero();
    cfg.bc_family = "fixed-from-ic";
    cfg.snapshot_times =
        c.get_double_list("snapshots", {0.0, 0.001, 0.05, 0.1, 0.2, 0.4, 0.5, 0.6});
    cfg.sample_every = c.get_int("sample_every", 1);
    cfg.out_dir = c.get("out", "out-blowup");
    cfg.backend = detail::backend_from(c);
    return cfg;
}

inline ExperimentConfig micromag_config(const Config& c) {
    c.restrict_keys({"experiment", "scenario", "Ms", "Aex", "Ku", "L", "gamma", "mu0", "alpha",
                     "dt_ps", "T_ns", "nx", "ny", "snapshots_ps", "sample_every", "out", "solver",
                     "seed"});
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::micromag;
    cfg.scenario = c.get("scenario", "vortex");

    MaterialParams mat;
    mat.Ms = c.get_double("Ms", 8.0e5);
    mat.A_ex = c.get_double("Aex", 1.3e-11);
    mat.gamma = c.get_double("gamma", 1.76086e11);
    mat.mu0 = c.get_double("mu0", 4.0e-7 * std::numbers::pi);

    double dt_ps = 0.0, t_ns = 0.0;
    std::vector<double> snapshots_ps;
    if (cfg.scenario == "anisotropy-e1" || cfg.scenario == "anisotropy-e3") {
        mat.Ku = c.get_double("Ku", 500.0);
        mat.alpha = c.get_double("alpha", 1.0);
        mat.L = c.get_double("L", 1.0e-6); // 1 um film edge
        cfg.rect = unit_square();
        cfg.nx = c.get_int("nx", 50);
        cfg.ny = c.get_int("ny", 50);
        cfg.ic_name = "blowup";
        cfg.blowup_center = Vec2(0.5, 0.5);
        cfg.bc_family = "fixed-from-ic";
        dt_ps = c.get_double("dt_ps", 1.0);
        t_ns = c.get_double("T_ns", 6.0);
        snapshots_ps = c.get_double_list(
            "snapshots_ps", {0.0, 10.0, 100.0, 500.0, 1000.0, 2000.0, 4000.0, 6000.0});
    } else if (cfg.scenario == "vortex" || cfg.scenario == "metastable-1" ||
               cfg.scenario == "metastable-2") {
        mat.Ku = c.get_double("Ku", 100.0);
        mat.alpha = c.get_double("alpha", cfg.scenario == "vortex" ? 1.0 : 0.01);
        mat.L = c.get_double("L", 1.0e-8); // 20 nm x 10 nm film, unit length 10 nm
        cfg.rect = Rect{0.0, 0.0, 2.0, 1.0};
        cfg.nx = c.get_int("nx", 100);
        cfg.ny = c.get_int("ny", 50);
        cfg.ic_name = cfg.scenario == "vortex"          ? "uniform-e3"
                      : cfg.scenario == "metastable-1" ? "four-domain"
                                                        : "random";
        cfg.bc_family = "vortex-frame";
        dt_ps = c.get_double("dt_ps", 0.1);
        t_ns = c.get_double("T_ns", 5.0);
        snapshots_ps = c.get_double_list("snapshots_ps", {});
        if (snapshots_ps.empty())
            for (int k = 0; k <= 4; ++k)
                snapshots_ps.push_back(1e3 * t_ns * k / 4.0);
    } else {
        throw ConfigError("unknown micromag scenario: " + cfg.scenario);
    }

    cfg.material = mat;
    DimensionlessParams p = nondimensionalize(mat);
    p.axis = (cfg.scenario == "anisotropy-e3") ? EasyAxis::e3 : EasyAxis::e1;
    cfg.params = p;

    const double ps = 1e-12 / p.time_unit; // dimensionless time per picosecond
    cfg.dt = dt_ps * ps;
    cfg.T = t_ns * 1e3 * ps;
    for (double s : snapshots_ps)
        cfg.snapshot_times.push_back(s * ps);
    cfg.sample_every = c.get_int("sample_every", 1);
    cfg.out_dir = c.get("out", "out-micromag");
    cfg.seed = static_cast<std::uint64_t>(c.get_int("seed", 0));
    cfg.backend = detail::backend_from(c);
    return cfg;
}

inline ExperimentConfig picard_config(const Config& c) {
    c.restrict_keys({"experiment", "n", "tau", "alpha", "tol", "max_iters", "out", "solver", "seed"});
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::picard_check;
    cfg.nx = cfg.ny = c.get_int("n", 32);
    cfg.params = detail::simplified_params(c.get_double("alpha", 0.1));
    cfg.tau = c.get_double("tau", 1e-3);
    cfg.picard_tol = c.get_double("tol", 1e-11);
    cfg.picard_max_iters = c.get_int("max_iters", 40);
    cfg.out_dir = c.get("out", "out-picard");
    cfg.backend = detail::backend_from(c);
    return cfg;
}

} // namespace llfv
