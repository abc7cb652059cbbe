#include "vesmg/multigrid.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

namespace vesmg {

void restrict_into(const Field& fine, Field& coarse) {
    const GridSpec cs = fine.spec().coarsened();
    if (!(coarse.spec() == cs))
        throw std::invalid_argument("restrict_into: coarse field has wrong dimensions");
    for (int J = 1; J <= cs.n; ++J) {
        const double* f0 = fine.row(2 * J - 1);
        const double* f1 = fine.row(2 * J);
        double* c = coarse.row(J);
        for (int I = 1; I <= cs.m; ++I) {
            const int i = 2 * I - 1;
            c[I] = 0.25 * ((f0[i] + f0[i + 1]) + (f1[i] + f1[i + 1]));
        }
    }
}

Field restrict_field(const Field& fine) {
    Field coarse(fine.spec().coarsened());
    restrict_into(fine, coarse);
    return coarse;
}

void prolong_into(const Field& coarse, Field& fine) {
    const GridSpec& cs = coarse.spec();
    if (!(fine.spec() == GridSpec::make(2 * cs.m, 2 * cs.n, 0.5 * cs.h)))
        throw std::invalid_argument("prolong_into: fine field has wrong dimensions");
    for (int J = 1; J <= cs.n; ++J) {
        const double* c = coarse.row(J);
        double* f0 = fine.row(2 * J - 1);
        double* f1 = fine.row(2 * J);
        for (int I = 1; I <= cs.m; ++I) {
            const int i = 2 * I - 1;
            f0[i] = c[I];
            f0[i + 1] = c[I];
            f1[i] = c[I];
            f1[i + 1] = c[I];
        }
    }
}

Field prolong_field(const Field& coarse) {
    const GridSpec& cs = coarse.spec();
    Field fine(GridSpec::make(2 * cs.m, 2 * cs.n, 0.5 * cs.h));
    prolong_into(coarse, fine);
    return fine;
}

void prolong_add_into(const Field& coarse, Field& fine) {
    const GridSpec& cs = coarse.spec();
    if (!(fine.spec() == GridSpec::make(2 * cs.m, 2 * cs.n, 0.5 * cs.h)))
        throw std::invalid_argument("prolong_add_into: fine field has wrong dimensions");
    for (int J = 1; J <= cs.n; ++J) {
        const double* c = coarse.row(J);
        double* f0 = fine.row(2 * J - 1);
        double* f1 = fine.row(2 * J);
        for (int I = 1; I <= cs.m; ++I) {
            const int i = 2 * I - 1;
            f0[i] += c[I];
            f0[i + 1] += c[I];
            f1[i] += c[I];
            f1[i + 1] += c[I];
        }
    }
}

void MgParams::validate() const {
    if (sweeps < 1)
        throw std::invalid_argument("mg.lambda must be >= 1");
    if (!(tol > 0.0))
        throw std::invalid_argument("mg.tol must be positive");
    if (max_cycles < 1)
        throw std::invalid_argument("mg.max_cycles must be >= 1");
    if (coarse_sweeps < 0)
        throw std::invalid_argument("mg.coarse_sweeps must be >= 0");
    if (mass_tol < 0.0)
        throw std::invalid_argument("mg.mass_tol must be >= 0");
}

int auto_depth(int m, int n) {
    int d = 0;
    while (m % 2 == 0 && n % 2 == 0 && std::min(m, n) >= 8) {
        m /= 2;
        n /= 2;
        ++d;
    }
    return d;
}

Hierarchy::Hierarchy(const GridSpec& fine, const MgParams& mg) : mg_(mg) {
    mg_.validate();
    int depth = mg.depth >= 0 ? mg.depth : auto_depth(fine.m, fine.n);
    specs_.push_back(fine);
    for (int d = 0; d < depth; ++d) {
        if (!specs_.back().coarsenable()) {
            std::ostringstream msg;
            msg << "mg.depth = " << depth << " not reachable from " << fine.m << "x" << fine.n
                << ": level " << d << " is " << specs_.back().m << "x" << specs_.back().n;
            throw std::invalid_argument(msg.str());
        }
        specs_.push_back(specs_.back().coarsened());
    }
    const std::size_t L = specs_.size();
    ctx_.resize(L);
    xs_.reserve(L);
    rx_.reserve(L);
    srcs_.reserve(L);
    work_.reserve(L);
    for (const GridSpec& s : specs_) {
        xs_.emplace_back(s);
        rx_.emplace_back(s);
        srcs_.emplace_back(s);
        work_.emplace_back(s);
    }
}

void Hierarchy::prepare_step(const State& prev, double s, const ModelParams& params, double ah) {
    Field phi_k = prev.phi;
    Field psi_k = prev.psi;
    apply_neumann_bc(phi_k);
    apply_neumann_bc(psi_k);
    const double bk = surface_quadrature(phi_k, params.epsilon);
    ctx_[0] = make_step_context(phi_k, psi_k, s, params, bk, ah);
    for (std::size_t d = 1; d < specs_.size(); ++d) {
        phi_k = restrict_field(phi_k);
        psi_k = restrict_field(psi_k);
        ctx_[d] = make_step_context(phi_k, psi_k, s, params, bk, ah);
    }
}

void Hierarchy::fas_vcycle(State& x, const SourceBundle& src, int level) {
    const std::size_t d = static_cast<std::size_t>(level);
    const SmootherOptions opts{mg_.refresh_within_sweep};
    smooth(x, src, ctx_[d], mg_.sweeps, opts);

    if (level < depth()) {
        // Coarse source S_{L-1} = R(S_L - N_L(x)) + N_{L-1}(R x).
        SourceBundle& defect = work_[d];
        apply_N(x, ctx_[d], defect);
        for (int k = 0; k < 5; ++k) {
            Field& dk = defect[k];
            const Field& sk = src[k];
            for (int j = 1; j <= ctx_[d].spec.n; ++j) {
                double* r = dk.row(j);
                const double* sr = sk.row(j);
                for (int i = 1; i <= ctx_[d].spec.m; ++i)
                    r[i] = sr[i] - r[i];
            }
            restrict_into(dk, srcs_[d + 1][k]);
        }
        State& rxc = rx_[d + 1];
        for (int k = 0; k < 5; ++k)
            restrict_into(x.component(k), rxc.component(k));
        refresh_ghosts(rxc);
        apply_N(rxc, ctx_[d + 1], work_[d + 1]);
        for (int k = 0; k < 5; ++k) {
            Field& sk = srcs_[d + 1][k];
            const Field& nk = work_[d + 1][k];
            for (int j = 1; j <= ctx_[d + 1].spec.n; ++j) {
                double* sr = sk.row(j);
                const double* nr = nk.row(j);
                for (int i = 1; i <= ctx_[d + 1].spec.m; ++i)
                    sr[i] += nr[i];
            }
        }
        // Recurse from the restricted iterate, then prolong the correction.
        State& xc = xs_[d + 1];
        xc = rxc;
        fas_vcycle(xc, srcs_[d + 1], level + 1);
        for (int k = 0; k < 5; ++k) {
            Field& ck = xc.component(k);
            const Field& rk = rxc.component(k);
            for (int j = 1; j <= ctx_[d + 1].spec.n; ++j) {
                double* cr = ck.row(j);
                const double* rr = rk.row(j);
                for (int i = 1; i <= ctx_[d + 1].spec.m; ++i)
                    cr[i] -= rr[i];
            }
            prolong_add_into(ck, x.component(k));
        }
        refresh_ghosts(x);
    } else if (depth() > 0) {
        // Coarsest-level solve stand-in.
        smooth(x, src, ctx_[d], mg_.coarse_sweeps, opts);
    }

    smooth(x, src, ctx_[d], mg_.sweeps, opts);
}

SolveStats Hierarchy::solve_time_step(const State& prev, double s, const ModelParams& params,
                                      double ah, State& next) {
    prepare_step(prev, s, params, ah);
    SourceBundle& src = srcs_[0];
    assemble_source(ctx_[0], src);

    next = prev;
    refresh_ghosts(next);

    SolveStats stats;
    double r = residual_norm(next, src, ctx_[0]);
    stats.residuals.push_back(r);
    auto mass_ok = [&]() {
        return mg_.mass_tol <= 0.0 ||
               std::abs(residual_mass_defect(next, src, ctx_[0])) <= mg_.mass_tol;
    };
    if (r < mg_.tol && mass_ok())
        return stats;

    for (int cycle = 1; cycle <= mg_.max_cycles; ++cycle) {
        fas_vcycle(next, src, 0);
        const double rn = residual_norm(next, src, ctx_[0]);
        if (rn >= stats.residuals.back()) {
            ++stats.monotonicity_violations;
            std::cerr << "[vesmg] warning: residual did not decrease in V-cycle " << cycle << " ("
                      << stats.residuals.back() << " -> " << rn << ")\n";
        }
        stats.residuals.push_back(rn);
        stats.cycles = cycle;
        if (rn < mg_.tol && mass_ok())
            return stats;
    }
    std::ostringstream msg;
    msg << "multigrid: " << mg_.max_cycles << " V-cycles did not reach tol " << mg_.tol
        << " (last residual " << stats.residuals.back() << ")";
    throw NotConvergedError(msg.str(), stats.residuals);
}

} // namespace vesmg
