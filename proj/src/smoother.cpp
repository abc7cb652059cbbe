#include "vesmg/smoother.hpp"

namespace vesmg {

void smooth_sweep(State& x, const SourceBundle& src, const StepContext& ctx,
                  const SmootherOptions& opts) {
    const GridSpec& spec = ctx.spec;
    const int m = spec.m;
    const int n = spec.n;
    const double h2 = spec.h * spec.h;
    const double eps = ctx.params.epsilon;
    const double inv_eps = 1.0 / eps;
    const double eps_h2 = eps / h2;
    const double four_eps_h2 = 4.0 * eps_h2;
    const double g2_h2 = ctx.params.gamma2() / h2;
    const double four_g2_h2 = 4.0 * g2_h2;
    const double s_mphi = ctx.s * ctx.params.m_phi;
    const double s_h2 = ctx.s / h2;

    for (int j = 1; j <= n; ++j) {
        double* ph = x.phi.row(j);
        double* phN = x.phi.row(j + 1);
        double* phS = x.phi.row(j - 1);
        double* mu = x.mu.row(j);
        double* om = x.omega.row(j);
        double* omN = x.omega.row(j + 1);
        double* omS = x.omega.row(j - 1);
        double* ps = x.psi.row(j);
        double* nu = x.nu.row(j);
        double* nuN = x.nu.row(j + 1);
        double* nuS = x.nu.row(j - 1);
        const double* s1 = src[0].row(j);
        const double* s2 = src[1].row(j);
        const double* s3 = src[2].row(j);
        const double* s4 = src[3].row(j);
        const double* s5 = src[4].row(j);
        const double* oc = ctx.omega_coef.row(j);
        const double* pc = ctx.psi_coef.row(j);
        const double* mew = ctx.mob_ew.row(j);
        const double* mnsN = ctx.mob_ns.row(j);     // index [i-1]
        const double* mnsS = ctx.mob_ns.row(j - 1); // index [i-1]

        for (int i = 1; i <= m; ++i) {
            // (phi, mu, omega) block: the Laplacian diagonals are pulled
            // into the matrix, neighbors go to the right-hand side, and the
            // cubic is linearized at the current value phi^l.
            const double c2 = oc[i] + four_g2_h2;
            const double rhs2 = s2[i] - g2_h2 * (om[i + 1] + om[i - 1] + omN[i] + omS[i]);
            const double pl = ph[i];
            const double c3 = pl * pl * inv_eps + four_eps_h2;
            const double rhs3 =
                s3[i] - pl * inv_eps - eps_h2 * (ph[i + 1] + ph[i - 1] + phN[i] + phS[i]);
            const Local3 b = solve_local3(s_mphi, c2, c3, s1[i], rhs2, rhs3);
            ph[i] = b.phi;
            mu[i] = b.mu;
            om[i] = b.omega;

            // (psi, nu) block with the frozen edge mobilities.
            const double me = mew[i];
            const double mw = mew[i - 1];
            const double mn = mnsN[i - 1];
            const double ms = mnsS[i - 1];
            const double a = s_h2 * (me + mw + mn + ms);
            const double rhs4 =
                s4[i] + s_h2 * (me * nu[i + 1] + mw * nu[i - 1] + mn * nuN[i] + ms * nuS[i]);
            const Local2 c = solve_local2(a, pc[i], rhs4, s5[i]);
            ps[i] = c.psi;
            nu[i] = c.nu;

            if (opts.refresh_within_sweep) {
                if (i == 1) {
                    ph[0] = ph[1]; mu[0] = mu[1]; om[0] = om[1]; ps[0] = ps[1]; nu[0] = nu[1];
                }
                if (i == m) {
                    ph[m + 1] = ph[m]; mu[m + 1] = mu[m]; om[m + 1] = om[m];
                    ps[m + 1] = ps[m]; nu[m + 1] = nu[m];
                }
                if (j == 1) {
                    phS[i] = ph[i]; x.mu.row(0)[i] = mu[i]; omS[i] = om[i];
                    x.psi.row(0)[i] = ps[i]; nuS[i] = nu[i];
                }
                if (j == n) {
                    phN[i] = ph[i]; x.mu.row(n + 1)[i] = mu[i]; omN[i] = om[i];
                    x.psi.row(n + 1)[i] = ps[i]; nuN[i] = nu[i];
                }
            }
        }
    }
    refresh_ghosts(x);
}

void smooth(State& x, const SourceBundle& src, const StepContext& ctx, int sweeps,
            const SmootherOptions& opts) {
    for (int k = 0; k < sweeps; ++k)
        smooth_sweep(x, src, ctx, opts);
}

} // namespace vesmg
