// sim.hpp -- experiment driver: initial-condition generators, the
// time-stepping loop with per-step diagnostics, and the convergence /
// solver-complexity study harnesses.
#pragma once

#include <utility>
#include <vector>

#include "vesmg/config.hpp"
#include "vesmg/multigrid.hpp"
#include "vesmg/sim_types.hpp"

namespace vesmg {

struct EnergyIncreaseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Diffuse tanh profiles evaluated at cell centers plus the affine psi map.
std::pair<Field, Field> init_tanh_profile(const GridSpec& spec, const InitialCondition& ic,
                                          double eps);

// Sharp +-1 indicator of the same geometry (+1 inside).
Field indicator_field(const GridSpec& spec, const InitialCondition& ic);

// Relax a +-1 indicator toward its diffuse equilibrium profile with the
// given number of semi-implicit classical Cahn-Hilliard steps (unit
// mobility, Neumann walls, step size dt_factor * h^2); the result is
// clamped to [-1, 1].
Field presmooth_indicator(const Field& phi_hat, double eps, int steps, double dt_factor = 0.1);

// phi^0 / psi^0 for a config (tanh profile, or indicator + CH presmoothing
// when ic.presmooth_steps > 0).
std::pair<Field, Field> make_initial_fields(const GridSpec& spec, const InitialCondition& ic,
                                            double eps);

// Energies, masses and region concentrations of one accepted state.
// Cells with phi >= 0 count as interior. inner_mass + outer_mass is exact
// by construction (total_mass is their sum).
DiagnosticsRow compute_diagnostics(const Field& phi, const Field& psi, const ModelParams& params,
                                   double area_target, double time, int vcycles);

struct RunResult {
    State final_state;
    double ah = 0.0;
    std::vector<DiagnosticsRow> rows;    // one per accepted step, rows[0] at t = 0
    std::vector<SolveStats> step_stats;  // one per accepted step
};

// Runs the configured simulation. When cfg.out_dir is nonempty, the
// resolved config is persisted there before any computation, and
// diagnostics (at diag_stride) and field snapshots (at snapshot_stride)
// are written as the run progresses. Throws NotConvergedError /
// EnergyIncreaseError; partial diagnostics stay on disk.
RunResult run(const RunConfig& cfg);

struct ConvergenceRow {
    int coarse_m = 0;
    int fine_m = 0;
    double error = 0.0;
    double rate = 0.0; // log2 of the previous pair's error over this one; 0 for the first pair
};

// Cauchy convergence study on cfg.convergence_grids under the s = C h^2
// refinement path: every grid doubling quarters the time step. Errors
// compare each final phi against the cell-average restriction of the next
// finer one, in the configured norm.
std::vector<ConvergenceRow> convergence_study(const RunConfig& cfg);

struct ComplexityRow {
    int m = 0;
    double h = 0.0;
    int iterations = 0;                    // V-cycles at the last time step
    std::vector<SolveStats> step_stats;    // full histories, one per step
};

// Iteration-count study across cfg.complexity_grids, cfg.complexity_steps
// time steps each.
std::vector<ComplexityRow> complexity_study(const RunConfig& cfg);

} // namespace vesmg
