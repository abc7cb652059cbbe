// multigrid.hpp -- grid hierarchy, cell-average restriction, piecewise
// constant prolongation, the recursive FAS V-cycle, and the per-time-step
// V-cycle convergence loop.
#pragma once

#include <stdexcept>
#include <vector>

#include "vesmg/smoother.hpp"

namespace vesmg {

// Cell-average restriction: each coarse cell is the mean of its 4 fine
// children, grouped as 0.25*((a+b)+(c+d)) so restrict(prolong(f)) == f exactly.
void restrict_into(const Field& fine, Field& coarse);
Field restrict_field(const Field& fine);

// Piecewise-constant prolongation: each fine child copies its parent.
void prolong_into(const Field& coarse, Field& fine);
Field prolong_field(const Field& coarse);
// fine += P(coarse) on interior cells.
void prolong_add_into(const Field& coarse, Field& fine);

struct MgParams {
    int sweeps = 2;          // lambda: pre- and post-smoothing sweeps
    double tol = 1e-10;      // tau: stopping tolerance on the 2,* residual norm
    int max_cycles = 100;    // m_max: V-cycles per time step
    int depth = -1;          // number of coarsenings; -1 = coarsen until min(m,n) = 4
    int coarse_sweeps = 20;  // smoothing sweeps standing in for a coarsest-level solve
    double mass_tol = 0.0;   // extra stop requirement |h^2 sum R4| <= mass_tol; 0 disables
    bool refresh_within_sweep = false;

    void validate() const;
    bool operator==(const MgParams&) const = default;
};

struct NotConvergedError : std::runtime_error {
    NotConvergedError(const std::string& what, std::vector<double> history)
        : std::runtime_error(what), residual_history(std::move(history)) {}
    std::vector<double> residual_history;
};

struct SolveStats {
    int cycles = 0;
    std::vector<double> residuals; // residuals[0] = initial guess, then one per cycle
    int monotonicity_violations = 0;
};

// Owns the coarsened grid chain, the per-level lagged coefficient caches of
// the current time step, and the V-cycle scratch states. One Hierarchy
// serves one solve at a time; independent runs use independent instances.
class Hierarchy {
public:
    Hierarchy(const GridSpec& fine, const MgParams& mg);

    int depth() const { return static_cast<int>(specs_.size()) - 1; }
    const GridSpec& spec(int level) const { return specs_[static_cast<std::size_t>(level)]; }
    const MgParams& params() const { return mg_; }

    // Rebuild every level's StepContext for the step prev -> next:
    // B_h^k is recomputed from prev.phi on the fine grid, phi^k / psi^k are
    // restricted level by level and the nonlinear coefficients re-evaluated
    // on the restricted fields. The scalar gamma3 (B_h^k - A_h) is shared
    // by all levels.
    void prepare_step(const State& prev, double s, const ModelParams& params, double ah);

    const StepContext& context(int level) const { return ctx_[static_cast<std::size_t>(level)]; }

    // One FAS V-cycle at the given level (0 = finest). src is this level's
    // source; x is updated in place. Requires prepare_step beforehand.
    void fas_vcycle(State& x, const SourceBundle& src, int level);

    // Full time step: prepare contexts from prev, assemble the fine source,
    // then run V-cycles from the initial guess prev until the fine residual
    // drops below tol (plus the optional mass-closure bound). Throws
    // NotConvergedError after max_cycles.
    SolveStats solve_time_step(const State& prev, double s, const ModelParams& params, double ah,
                               State& next);

private:
    MgParams mg_;
    std::vector<GridSpec> specs_;
    std::vector<StepContext> ctx_;
    // Per-level scratch (index = level): iterate, restricted fine iterate,
    // coarse source, operator values / defect.
    std::vector<State> xs_;
    std::vector<State> rx_;
    std::vector<SourceBundle> srcs_;
    std::vector<SourceBundle> work_;
};

// Largest usable coarsening depth for an m x n grid: both dimensions stay
// even and the coarsest keeps min(m,n) >= 4.
int auto_depth(int m, int n);

} // namespace vesmg
