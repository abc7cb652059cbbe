#include "vesmg/scheme.hpp"

#include <cmath>

#include "vesmg/summation.hpp"

namespace vesmg {

void refresh_ghosts(State& s) {
    apply_neumann_bc(s.phi);
    apply_neumann_bc(s.mu);
    apply_neumann_bc(s.omega);
    apply_neumann_bc(s.psi);
    apply_neumann_bc(s.nu);
}

StepContext make_step_context(const Field& phi_k, const Field& psi_k, double s,
                              const ModelParams& params, double bk, double ah) {
    StepContext ctx;
    ctx.spec = phi_k.spec();
    ctx.params = params;
    ctx.s = s;
    ctx.bk = bk;
    ctx.ah = ah;
    ctx.phi_k = phi_k;
    ctx.psi_k = psi_k;
    apply_neumann_bc(ctx.phi_k);
    apply_neumann_bc(ctx.psi_k);

    const GridSpec& spec = ctx.spec;
    const double g2_eps2 = params.gamma2() / (params.epsilon * params.epsilon);
    const double base = params.gamma1() + params.gamma3() * (bk - ah);

    ctx.omega_coef = Field(spec);
    ctx.psi_coef = Field(spec);
    for (int j = 1; j <= spec.n; ++j) {
        const double* pk = ctx.phi_k.row(j);
        double* oc = ctx.omega_coef.row(j);
        double* pc = ctx.psi_coef.row(j);
        for (int i = 1; i <= spec.m; ++i) {
            oc[i] = base + g2_eps2 * double_well_d2(pk[i]);
            const double w = interp_p(pk[i]);
            pc[i] = 0.5 * (1.0 + w) * params.gamma_in + 0.5 * (1.0 - w) * params.gamma_out;
        }
    }

    // Edge mobilities frozen from phi^k: M^ew = M_psi(A_x phi^k), M^ns = M_psi(A_y phi^k).
    ctx.mob_ew = EdgeFieldEW(spec);
    ctx.mob_ns = EdgeFieldNS(spec);
    for (int j = 1; j <= spec.n; ++j) {
        const double* pk = ctx.phi_k.row(j);
        double* e = ctx.mob_ew.row(j);
        for (int i = 0; i <= spec.m; ++i)
            e[i] = mobility_psi(0.5 * (pk[i] + pk[i + 1]), params.m0);
    }
    for (int j = 0; j <= spec.n; ++j) {
        const double* pk = ctx.phi_k.row(j);
        const double* pkn = ctx.phi_k.row(j + 1);
        double* e = ctx.mob_ns.row(j);
        for (int i = 1; i <= spec.m; ++i)
            e[i - 1] = mobility_psi(0.5 * (pk[i] + pkn[i]), params.m0);
    }
    return ctx;
}

void assemble_source(const StepContext& ctx, SourceBundle& out) {
    const GridSpec& spec = ctx.spec;
    const ModelParams& p = ctx.params;
    for (int j = 1; j <= spec.n; ++j) {
        const double* pk = ctx.phi_k.row(j);
        const double* qk = ctx.psi_k.row(j);
        double* s1 = out[0].row(j);
        double* s2 = out[1].row(j);
        double* s3 = out[2].row(j);
        double* s4 = out[3].row(j);
        double* s5 = out[4].row(j);
        for (int i = 1; i <= spec.m; ++i) {
            s1[i] = pk[i];
            s2[i] = 0.5 * interp_p_d1(pk[i]) * (f_in(qk[i], p) - f_out(qk[i], p));
            s3[i] = 0.0;
            s4[i] = qk[i];
            const double w = interp_p(pk[i]);
            s5[i] = -0.5 * (1.0 + w) * p.gamma_in * p.psi_in
                    - 0.5 * (1.0 - w) * p.gamma_out * p.psi_out;
        }
    }
}

SourceBundle assemble_source(const StepContext& ctx) {
    SourceBundle out(ctx.spec);
    assemble_source(ctx, out);
    return out;
}

void apply_N(const State& x, const StepContext& ctx, SourceBundle& out) {
    const GridSpec& spec = ctx.spec;
    const int m = spec.m;
    const double h2 = spec.h * spec.h;
    const double inv_h2 = 1.0 / h2;
    const double eps = ctx.params.epsilon;
    const double inv_eps = 1.0 / eps;
    const double g2 = ctx.params.gamma2();
    const double s_mphi = ctx.s * ctx.params.m_phi;
    const double s_h2 = ctx.s * inv_h2;

    for (int j = 1; j <= spec.n; ++j) {
        const double* ph = x.phi.row(j);
        const double* phN = x.phi.row(j + 1);
        const double* phS = x.phi.row(j - 1);
        const double* mu = x.mu.row(j);
        const double* om = x.omega.row(j);
        const double* omN = x.omega.row(j + 1);
        const double* omS = x.omega.row(j - 1);
        const double* ps = x.psi.row(j);
        const double* nu = x.nu.row(j);
        const double* nuN = x.nu.row(j + 1);
        const double* nuS = x.nu.row(j - 1);
        const double* oc = ctx.omega_coef.row(j);
        const double* pc = ctx.psi_coef.row(j);
        const double* mew = ctx.mob_ew.row(j);
        const double* mnsN = ctx.mob_ns.row(j);     // edges (i, j+1/2), index [i-1]
        const double* mnsS = ctx.mob_ns.row(j - 1); // edges (i, j-1/2), index [i-1]
        double* n1 = out[0].row(j);
        double* n2 = out[1].row(j);
        double* n3 = out[2].row(j);
        double* n4 = out[3].row(j);
        double* n5 = out[4].row(j);
        for (int i = 1; i <= m; ++i) {
            n1[i] = ph[i] + s_mphi * mu[i];
            const double lap_om = inv_h2 * (om[i + 1] + om[i - 1] + omN[i] + omS[i] - 4.0 * om[i]);
            n2[i] = mu[i] - oc[i] * om[i] + g2 * lap_om;
            const double lap_ph = inv_h2 * (ph[i + 1] + ph[i - 1] + phN[i] + phS[i] - 4.0 * ph[i]);
            n3[i] = om[i] - inv_eps * (ph[i] * ph[i] * ph[i] - ph[i]) + eps * lap_ph;
            const double flux = mew[i] * (nu[i + 1] - nu[i]) - mew[i - 1] * (nu[i] - nu[i - 1])
                              + mnsN[i - 1] * (nuN[i] - nu[i]) - mnsS[i - 1] * (nu[i] - nuS[i]);
            n4[i] = ps[i] - s_h2 * flux;
            n5[i] = nu[i] - pc[i] * ps[i];
        }
    }
}

SourceBundle apply_N(const State& x, const StepContext& ctx) {
    SourceBundle out(ctx.spec);
    apply_N(x, ctx, out);
    return out;
}

double residual(const State& x, const SourceBundle& src, const StepContext& ctx,
                SourceBundle& r_out) {
    apply_N(x, ctx, r_out);
    const GridSpec& spec = ctx.spec;
    CompensatedSum sq;
    for (int k = 0; k < 5; ++k) {
        for (int j = 1; j <= spec.n; ++j) {
            const double* s = src[k].row(j);
            double* r = r_out[k].row(j);
            for (int i = 1; i <= spec.m; ++i) {
                r[i] = s[i] - r[i];
                sq.add(r[i] * r[i]);
            }
        }
    }
    return std::sqrt(sq.value() / (5.0 * spec.m * spec.n));
}

double residual_norm(const State& x, const SourceBundle& src, const StepContext& ctx) {
    thread_local SourceBundle scratch;
    if (!(scratch.spec() == ctx.spec))
        scratch = SourceBundle(ctx.spec);
    return residual(x, src, ctx, scratch);
}

double residual_mass_defect(const State& x, const SourceBundle& src, const StepContext& ctx) {
    thread_local SourceBundle scratch;
    if (!(scratch.spec() == ctx.spec))
        scratch = SourceBundle(ctx.spec);
    apply_N(x, ctx, scratch);
    CompensatedSum acc;
    for (int j = 1; j <= ctx.spec.n; ++j) {
        const double* s = src[3].row(j);
        const double* n = scratch[3].row(j);
        for (int i = 1; i <= ctx.spec.m; ++i)
            acc.add(s[i] - n[i]);
    }
    return ctx.spec.h * ctx.spec.h * acc.value();
}

} // namespace vesmg
