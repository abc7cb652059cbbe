#include "vesmg/sim.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "vesmg/summation.hpp"

namespace vesmg {

namespace {

double profile_argument(const GridSpec& spec, const InitialCondition& ic, int i, int j) {
    const double dx = spec.cell_x(i) - ic.center_x;
    const double dy = spec.cell_y(j) - ic.center_y;
    if (ic.kind == IcKind::tanh_ellipse)
        return ic.radius - std::sqrt(ic.xscale * dx * dx + ic.yscale * dy * dy);
    const double rho = std::sqrt(dx * dx + dy * dy);
    const double theta = std::atan2(dy, dx);
    const double r = ic.radius + ic.amplitude * std::cos(ic.mode * theta);
    return r - rho;
}

void run_tasks(std::vector<std::function<void()>> tasks, int jobs) {
    if (jobs < 1)
        jobs = 1;
    std::vector<std::exception_ptr> errors(tasks.size());
    std::size_t next = 0;
    if (jobs == 1) {
        for (std::size_t t = 0; t < tasks.size(); ++t) {
            try {
                tasks[t]();
            } catch (...) {
                errors[t] = std::current_exception();
            }
        }
    } else {
        std::mutex mtx;
        auto worker = [&]() {
            for (;;) {
                std::size_t t;
                {
                    std::lock_guard<std::mutex> lock(mtx);
                    if (next >= tasks.size())
                        return;
                    t = next++;
                }
                try {
                    tasks[t]();
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        const int nw = std::min<std::size_t>(jobs, tasks.size());
        pool.reserve(nw);
        for (int w = 0; w < nw; ++w)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
    return os.str();
}

void write_diag_row(std::ostream& os, const DiagnosticsRow& r) {
    os << fmt(r.time) << ',' << fmt(r.f_surf) << ',' << fmt(r.f_bend) << ',' << fmt(r.f_area)
       << ',' << fmt(r.f_osm) << ',' << fmt(r.f_total) << ',' << fmt(r.bh) << ','
       << fmt(r.total_mass) << ',' << fmt(r.inner_mass) << ',' << fmt(r.outer_mass) << ','
       << fmt(r.inner_conc) << ',' << fmt(r.outer_conc) << ',' << r.vcycles << '\n';
}

} // namespace

std::pair<Field, Field> init_tanh_profile(const GridSpec& spec, const InitialCondition& ic,
                                          double eps) {
    const double w = 1.0 / (std::sqrt(2.0) * eps);
    Field phi(spec), psi(spec);
    for (int j = 1; j <= spec.n; ++j) {
        double* p = phi.row(j);
        double* q = psi.row(j);
        for (int i = 1; i <= spec.m; ++i) {
            p[i] = std::tanh(profile_argument(spec, ic, i, j) * w);
            q[i] = ic.psi_slope * p[i] + ic.psi_offset;
        }
    }
    apply_neumann_bc(phi);
    apply_neumann_bc(psi);
    return {std::move(phi), std::move(psi)};
}

Field indicator_field(const GridSpec& spec, const InitialCondition& ic) {
    Field phi(spec);
    for (int j = 1; j <= spec.n; ++j) {
        double* p = phi.row(j);
        for (int i = 1; i <= spec.m; ++i)
            p[i] = profile_argument(spec, ic, i, j) >= 0.0 ? 1.0 : -1.0;
    }
    apply_neumann_bc(phi);
    return phi;
}

Field presmooth_indicator(const Field& phi_hat, double eps, int steps, double dt_factor) {
    if (!(eps > 0.0))
        throw std::invalid_argument("presmooth_indicator: eps must be positive");
    const GridSpec& spec = phi_hat.spec();
    const int m = spec.m;
    const int n = spec.n;
    const double h2 = spec.h * spec.h;
    const double s = dt_factor * h2;
    const double inv_eps = 1.0 / eps;
    const double eps_h2 = eps / h2;
    const double s_h2 = s / h2;

    Field phi = phi_hat;
    apply_neumann_bc(phi);
    Field w(spec);
    // w = g'(phi)/eps - eps lap phi at the start.
    {
        Field lap = laplacian(phi);
        for (int j = 1; j <= n; ++j) {
            double* wr = w.row(j);
            const double* pr = phi.row(j);
            const double* lr = lap.row(j);
            for (int i = 1; i <= m; ++i)
                wr[i] = inv_eps * double_well_d1(pr[i]) - eps * lr[i];
        }
        apply_neumann_bc(w);
    }

    const int max_sweeps = 500;
    const double tol = 1e-10 * (1.0 + inv_eps);

    for (int step = 0; step < steps; ++step) {
        Field phi_old = phi;
        for (int sweep = 0; sweep < max_sweeps; ++sweep) {
            // One lexicographic sweep of the coupled (phi, w) system
            //   phi - s lap w = phi_old,  w - g'(phi)/eps + eps lap phi = 0
            // with the cubic linearized at the current value.
            for (int j = 1; j <= n; ++j) {
                double* ph = phi.row(j);
                double* phN = phi.row(j + 1);
                double* phS = phi.row(j - 1);
                double* wr = w.row(j);
                double* wN = w.row(j + 1);
                double* wS = w.row(j - 1);
                const double* po = phi_old.row(j);
                for (int i = 1; i <= m; ++i) {
                    const double ra = po[i] + s_h2 * (wr[i + 1] + wr[i - 1] + wN[i] + wS[i]);
                    const double pl = ph[i];
                    const double c = pl * pl * inv_eps + 4.0 * eps_h2;
                    const double rb = -pl * inv_eps -
                                      eps_h2 * (ph[i + 1] + ph[i - 1] + phN[i] + phS[i]);
                    const double a = 4.0 * s_h2;
                    const double det = 1.0 + a * c;
                    const double phi_new = (ra - a * rb) / det;
                    wr[i] = (rb + c * ra) / det;
                    ph[i] = phi_new;
                }
            }
            apply_neumann_bc(phi);
            apply_neumann_bc(w);

            CompensatedSum sq;
            for (int j = 1; j <= n; ++j) {
                const double* ph = phi.row(j);
                const double* phN = phi.row(j + 1);
                const double* phS = phi.row(j - 1);
                const double* wr = w.row(j);
                const double* wN = w.row(j + 1);
                const double* wS = w.row(j - 1);
                const double* po = phi_old.row(j);
                for (int i = 1; i <= m; ++i) {
                    const double lap_w =
                        (wr[i + 1] + wr[i - 1] + wN[i] + wS[i] - 4.0 * wr[i]) / h2;
                    const double lap_p =
                        (ph[i + 1] + ph[i - 1] + phN[i] + phS[i] - 4.0 * ph[i]) / h2;
                    const double r1 = po[i] - ph[i] + s * lap_w;
                    const double r2 = wr[i] - inv_eps * double_well_d1(ph[i]) + eps * lap_p;
                    sq.add(r1 * r1 + r2 * r2);
                }
            }
            if (std::sqrt(sq.value() / (2.0 * m * n)) < tol)
                break;
        }
    }
    for (int j = 1; j <= n; ++j) {
        double* p = phi.row(j);
        for (int i = 1; i <= m; ++i)
            p[i] = std::clamp(p[i], -1.0, 1.0);
    }
    apply_neumann_bc(phi);
    return phi;
}

std::pair<Field, Field> make_initial_fields(const GridSpec& spec, const InitialCondition& ic,
                                            double eps) {
    if (ic.presmooth_steps > 0) {
        Field phi = presmooth_indicator(indicator_field(spec, ic), eps, ic.presmooth_steps,
                                        ic.presmooth_dt_factor);
        Field psi(spec);
        for (int j = 1; j <= spec.n; ++j) {
            const double* p = phi.row(j);
            double* q = psi.row(j);
            for (int i = 1; i <= spec.m; ++i)
                q[i] = ic.psi_slope * p[i] + ic.psi_offset;
        }
        apply_neumann_bc(psi);
        return {std::move(phi), std::move(psi)};
    }
    return init_tanh_profile(spec, ic, eps);
}

DiagnosticsRow compute_diagnostics(const Field& phi, const Field& psi, const ModelParams& params,
                                   double area_target, double time, int vcycles) {
    const GridSpec& spec = phi.spec();
    DiagnosticsRow row;
    row.time = time;
    row.vcycles = vcycles;
    const EnergyReport e = total_energies(phi, psi, params, area_target);
    row.f_surf = e.f_surf;
    row.f_bend = e.f_bend;
    row.f_area = e.f_area;
    row.f_osm = e.f_osm;
    row.f_total = e.total;
    row.bh = e.bh;

    CompensatedSum in_sum, out_sum;
    long in_count = 0, out_count = 0;
    for (int j = 1; j <= spec.n; ++j) {
        const double* p = phi.row(j);
        const double* q = psi.row(j);
        for (int i = 1; i <= spec.m; ++i) {
            if (p[i] >= 0.0) {
                in_sum.add(q[i]);
                ++in_count;
            } else {
                out_sum.add(q[i]);
                ++out_count;
            }
        }
    }
    const double h2 = spec.h * spec.h;
    row.inner_mass = h2 * in_sum.value();
    row.outer_mass = h2 * out_sum.value();
    row.total_mass = row.inner_mass + row.outer_mass;
    row.inner_conc = in_count > 0 ? in_sum.value() / in_count : 0.0;
    row.outer_conc = out_count > 0 ? out_sum.value() / out_count : 0.0;
    return row;
}


RunResult run(const RunConfig& cfg) {
    cfg.validate();
    const GridSpec spec = cfg.grid();
    const int k_max = cfg.num_steps();
    const int snap_stride =
        cfg.snapshot_stride > 0 ? cfg.snapshot_stride : std::max(1, (k_max + 4) / 5);
    const int diag_stride = std::max(1, cfg.diag_stride);

    const bool to_disk = !cfg.out_dir.empty();
    std::ofstream diag_os;
    if (to_disk) {
        std::filesystem::create_directories(cfg.out_dir);
        // Persist the resolved configuration before any computation.
        {
            std::ofstream os(cfg.out_dir + "/config.resolved");
            if (!os)
                throw std::runtime_error("run: cannot write to output directory " + cfg.out_dir);
            os << serialize_config(cfg);
        }
        diag_os.open(cfg.out_dir + "/diagnostics.csv");
        diag_os << diagnostics_csv_header() << '\n';
    }

    auto [phi0, psi0] = make_initial_fields(spec, cfg.ic, cfg.model.epsilon);
    RunResult result;
    result.final_state = State(spec);
    State& state = result.final_state;
    state.phi = std::move(phi0);
    state.psi = std::move(psi0);
    refresh_ghosts(state);

    result.ah = surface_quadrature(state.phi, cfg.model.epsilon);

    Hierarchy hier(spec, cfg.mg);

    auto snapshot = [&](int k) {
        if (!to_disk)
            return;
        write_field_file(cfg.out_dir + "/phi_" + std::to_string(k) + ".dat", state.phi);
        write_field_file(cfg.out_dir + "/psi_" + std::to_string(k) + ".dat", state.psi);
    };

    DiagnosticsRow row =
        compute_diagnostics(state.phi, state.psi, cfg.model, result.ah, 0.0, 0);
    result.rows.push_back(row);
    if (to_disk) {
        write_diag_row(diag_os, row);
        diag_os.flush();
        snapshot(0);
    }

    State next(spec);
    double prev_total = row.f_total;
    for (int k = 0; k < k_max; ++k) {
        SolveStats stats;
        try {
            stats = hier.solve_time_step(state, cfg.dt, cfg.model, result.ah, next);
        } catch (const NotConvergedError&) {
            diag_os.flush();
            throw;
        }
        std::swap(state, next);
        const double t = (k + 1) * cfg.dt;

        row = compute_diagnostics(state.phi, state.psi, cfg.model, result.ah, t, stats.cycles);
        result.rows.push_back(row);
        result.step_stats.push_back(stats);

        std::cerr << "[vesmg] step " << (k + 1) << "/" << k_max << " t=" << t
                  << " cycles=" << stats.cycles << " res=" << stats.residuals.back() << "\n";

        if (to_disk && ((k + 1) % diag_stride == 0 || k + 1 == k_max)) {
            write_diag_row(diag_os, row);
            diag_os.flush();
        }
        if ((k + 1) % snap_stride == 0 || k + 1 == k_max)
            snapshot(k + 1);

        if (row.f_total > prev_total + 1e-6 * std::abs(prev_total)) {
            std::ostringstream msg;
            msg << "run: total energy increased beyond tolerance at step " << (k + 1) << " ("
                << prev_total << " -> " << row.f_total << ")";
            throw EnergyIncreaseError(msg.str());
        }
        prev_total = row.f_total;
    }
    return result;
}

std::vector<ConvergenceRow> convergence_study(const RunConfig& cfg) {
    cfg.validate();
    const std::vector<int>& grids = cfg.convergence_grids;
    std::vector<Field> finals(grids.size());

    std::vector<std::function<void()>> tasks;
    for (std::size_t g = 0; g < grids.size(); ++g) {
        tasks.push_back([&, g]() {
            RunConfig sub = cfg;
            sub.mode = "simulate";
            const double scale = static_cast<double>(grids[g]) / cfg.grid_m;
            sub.grid_m = grids[g];
            sub.grid_n = static_cast<int>(std::llround(cfg.grid_n * scale));
            sub.dt = cfg.dt / (scale * scale); // refinement path s = C h^2
            sub.steps = 0;
            sub.jobs = 1;
            if (!cfg.out_dir.empty())
                sub.out_dir = cfg.out_dir + "/run_" + std::to_string(grids[g]);
            finals[g] = run(sub).final_state.phi;
        });
    }
    run_tasks(std::move(tasks), cfg.jobs);

    std::vector<ConvergenceRow> out;
    for (std::size_t g = 0; g + 1 < grids.size(); ++g) {
        Field restricted = restrict_field(finals[g + 1]);
        const Field& coarse = finals[g];
        double err = 0.0;
        if (cfg.convergence_norm == "max") {
            for (int j = 1; j <= coarse.spec().n; ++j) {
                const double* a = coarse.row(j);
                const double* b = restricted.row(j);
                for (int i = 1; i <= coarse.spec().m; ++i)
                    err = std::max(err, std::abs(a[i] - b[i]));
            }
        } else {
            CompensatedSum sq;
            for (int j = 1; j <= coarse.spec().n; ++j) {
                const double* a = coarse.row(j);
                const double* b = restricted.row(j);
                for (int i = 1; i <= coarse.spec().m; ++i) {
                    const double d = a[i] - b[i];
                    sq.add(d * d);
                }
            }
            err = coarse.spec().h * std::sqrt(sq.value());
        }
        ConvergenceRow row;
        row.coarse_m = grids[g];
        row.fine_m = grids[g + 1];
        row.error = err;
        row.rate = out.empty() || err == 0.0 ? 0.0 : std::log2(out.back().error / err);
        out.push_back(row);
    }

    if (!cfg.out_dir.empty()) {
        std::ofstream os(cfg.out_dir + "/convergence.csv");
        os << "coarse,fine,error,rate\n";
        for (const auto& r : out)
            os << r.coarse_m << ',' << r.fine_m << ',' << fmt(r.error) << ',' << fmt(r.rate)
               << '\n';
    }
    return out;
}

std::vector<ComplexityRow> complexity_study(const RunConfig& cfg) {
    cfg.validate();
    const std::vector<int>& grids = cfg.complexity_grids;
    std::vector<std::vector<SolveStats>> stats(grids.size());

    std::vector<std::function<void()>> tasks;
    for (std::size_t g = 0; g < grids.size(); ++g) {
        tasks.push_back([&, g]() {
            RunConfig sub = cfg;
            sub.mode = "simulate";
            const double scale = static_cast<double>(grids[g]) / cfg.grid_m;
            sub.grid_m = grids[g];
            sub.grid_n = static_cast<int>(std::llround(cfg.grid_n * scale));
            sub.steps = cfg.complexity_steps;
            sub.jobs = 1;
            if (!cfg.out_dir.empty())
                sub.out_dir = cfg.out_dir + "/run_" + std::to_string(grids[g]);
            stats[g] = run(sub).step_stats;
        });
    }
    run_tasks(std::move(tasks), cfg.jobs);

    std::vector<ComplexityRow> out;
    for (std::size_t g = 0; g < grids.size(); ++g) {
        ComplexityRow row;
        row.m = grids[g];
        row.h = cfg.grid_lx / grids[g];
        row.iterations = stats[g].empty() ? 0 : stats[g].back().cycles;
        row.step_stats = std::move(stats[g]);
        out.push_back(std::move(row));
    }

    if (!cfg.out_dir.empty()) {
        std::ofstream os(cfg.out_dir + "/complexity.csv");
        os << "m,h,iterations\n";
        for (const auto& r : out)
            os << r.m << ',' << fmt(r.h) << ',' << r.iterations << '\n';
        for (const auto& r : out) {
            std::ofstream rs(cfg.out_dir + "/residuals_" + std::to_string(r.m) + ".csv");
            rs << "time_step,vcycle_index,residual\n";
            for (std::size_t k = 0; k < r.step_stats.size(); ++k)
                for (std::size_t c = 0; c < r.step_stats[k].residuals.size(); ++c)
                    rs << (k + 1) << ',' << c << ',' << fmt(r.step_stats[k].residuals[c]) << '\n';
        }
    }
    return out;
}

} // namespace vesmg
