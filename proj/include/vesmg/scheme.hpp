// scheme.hpp -- the fully-discrete semi-implicit system N(x^{k+1}) = S(x^k):
// 5-field states, per-time-step lagged coefficient caches, source assembly,
// operator application, and the 2,* residual norm.
#pragma once

#include <array>

#include "vesmg/grid.hpp"
#include "vesmg/model.hpp"

namespace vesmg {

// The five unknowns of one time level on one grid level. All fields share
// one GridSpec; ghosts must be refreshed before the state is handed to the
// smoother or to residual/apply_N.
struct State {
    Field phi, mu, omega, psi, nu;

    State() = default;
    explicit State(const GridSpec& spec)
        : phi(spec), mu(spec), omega(spec), psi(spec), nu(spec) {}

    const GridSpec& spec() const { return phi.spec(); }

    Field& component(int k) {
        switch (k) {
        case 0: return phi;
        case 1: return mu;
        case 2: return omega;
        case 3: return psi;
        default: return nu;
        }
    }
    const Field& component(int k) const {
        return const_cast<State*>(this)->component(k);
    }
};

void refresh_ghosts(State& s);

// 5 cell-centered arrays; used for the source S, operator values N, and
// residuals. Ghost entries are unused.
struct SourceBundle {
    std::array<Field, 5> comp;

    SourceBundle() = default;
    explicit SourceBundle(const GridSpec& spec)
        : comp{Field(spec), Field(spec), Field(spec), Field(spec), Field(spec)} {}

    Field& operator[](int k) { return comp[static_cast<std::size_t>(k)]; }
    const Field& operator[](int k) const { return comp[static_cast<std::size_t>(k)]; }
    const GridSpec& spec() const { return comp[0].spec(); }
};

// Everything the operator and smoother need that is frozen at time level k:
// the lagged fields phi^k and psi^k on this grid level, the coefficient of
// omega in the mu equation (including gamma3 (B_h^k - A_h), a fine-grid
// scalar shared by all levels), the psi coefficient of the nu equation, and
// the edge mobilities M_psi(A phi^k).
struct StepContext {
    GridSpec spec;
    ModelParams params;
    double s = 0.0;  // time step
    double bk = 0.0; // surface quadrature of the fine-grid phi^k
    double ah = 0.0; // surface quadrature of the initial data (never changes)

    Field phi_k, psi_k;  // lagged fields, ghosts refreshed
    Field omega_coef;    // gamma1 + (gamma2/eps^2) g''(phi^k) + gamma3 (bk - ah)
    Field psi_coef;      // (1+p(phi^k))/2 gamma_in + (1-p(phi^k))/2 gamma_out
    EdgeFieldEW mob_ew;  // M_psi(A_x phi^k)
    EdgeFieldNS mob_ns;  // M_psi(A_y phi^k)
};

// Build the per-level caches from the lagged fields. phi_k and psi_k are
// copied in and their ghosts refreshed. bk and ah are passed in, not
// recomputed, so coarse levels can share the fine-grid scalars.
StepContext make_step_context(const Field& phi_k, const Field& psi_k, double s,
                              const ModelParams& params, double bk, double ah);

// S(x^k) componentwise:
//   S1 = phi^k
//   S2 = p'(phi^k)/2 [f_in(psi^k) - f_out(psi^k)]
//   S3 = 0
//   S4 = psi^k
//   S5 = -(1+p(phi^k))/2 gamma_in psi_in - (1-p(phi^k))/2 gamma_out psi_out
SourceBundle assemble_source(const StepContext& ctx);
void assemble_source(const StepContext& ctx, SourceBundle& out);

// N(x) componentwise, with the lagged coefficients taken from ctx:
//   N1 = phi + s M_phi mu
//   N2 = mu - omega_coef omega + gamma2 lap_h omega
//   N3 = omega - (phi^3 - phi)/eps + eps lap_h phi
//   N4 = psi - s [d_x(M^ew D_x nu) + d_y(M^ns D_y nu)]
//   N5 = nu - psi_coef psi
// Requires refreshed ghosts on the candidate.
void apply_N(const State& candidate, const StepContext& ctx, SourceBundle& out);
SourceBundle apply_N(const State& candidate, const StepContext& ctx);

// R = S - N(candidate) and the 2,* norm
//   ||R|| = sqrt( 1/(5 m n) sum_{k,i,j} R^(k)_{i,j}^2 )
// with the m, n of this level.
double residual(const State& candidate, const SourceBundle& src, const StepContext& ctx,
                SourceBundle& r_out);
double residual_norm(const State& candidate, const SourceBundle& src, const StepContext& ctx);

// Mass closure of the psi equation: h^2 sum_ij R4_ij, which equals the
// change of total psi mass the accepted state would incur.
double residual_mass_defect(const State& candidate, const SourceBundle& src,
                            const StepContext& ctx);

} // namespace vesmg
