// smoother.hpp -- lexicographic nonlinear Gauss-Seidel relaxation. Each
// interior cell solves the local linearized equations as an independent
// 3x3 block (phi, mu, omega) and 2x2 block (psi, nu) by Cramer's rule.
#pragma once

#include <stdexcept>

#include "vesmg/scheme.hpp"

namespace vesmg {

struct SingularLocalSystemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SmootherOptions {
    // When set, ghost mirrors are kept current as boundary cells update
    // within a sweep; default refreshes ghosts only between sweeps.
    bool refresh_within_sweep = false;
};

struct Local3 {
    double phi, mu, omega;
};
struct Local2 {
    double psi, nu;
};

// Cramer solve of
//   [ 1    s_mphi  0  ] [phi  ]   [b1]
//   [ 0    1      -c2 ] [mu   ] = [b2]
//   [-c3   0       1  ] [omega]   [b3]
// det = 1 + s_mphi c2 c3. Throws SingularLocalSystemError for |det| < 1e-300.
inline Local3 solve_local3(double s_mphi, double c2, double c3, double b1, double b2, double b3) {
    const double det = 1.0 + s_mphi * c2 * c3;
    if (!(det > 1e-300) && !(det < -1e-300))
        throw SingularLocalSystemError("smoother: singular 3x3 local system");
    const double inv = 1.0 / det;
    Local3 r;
    r.phi = (b1 - s_mphi * (b2 + c2 * b3)) * inv;
    r.mu = (b2 + c2 * b3 + c2 * c3 * b1) * inv;
    r.omega = (b3 + c3 * (b1 - s_mphi * b2)) * inv;
    return r;
}

// Cramer solve of
//   [ 1   a ] [psi]   [b4]
//   [-b   1 ] [nu ] = [b5]
// det = 1 + a b.
inline Local2 solve_local2(double a, double b, double b4, double b5) {
    const double det = 1.0 + a * b;
    if (!(det > 1e-300) && !(det < -1e-300))
        throw SingularLocalSystemError("smoother: singular 2x2 local system");
    const double inv = 1.0 / det;
    Local2 r;
    r.psi = (b4 - a * b5) * inv;
    r.nu = (b5 + b * b4) * inv;
    return r;
}

// One sweep from (1,1) to (m,n), i fastest. East and north neighbors are
// read at their pre-update (old) values, west and south at their updated
// ones. Ghosts are refreshed after the sweep.
void smooth_sweep(State& x, const SourceBundle& src, const StepContext& ctx,
                  const SmootherOptions& opts = {});

// sweeps applications of smooth_sweep (ghosts refreshed between sweeps).
void smooth(State& x, const SourceBundle& src, const StepContext& ctx, int sweeps,
            const SmootherOptions& opts = {});

} // namespace vesmg
