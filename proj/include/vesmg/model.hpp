// model.hpp -- free energy densities, chemical-potential building blocks
// (double well g, interpolant p, degenerate mobility M_psi, quadratic
// osmotic wells), total energies, and the common-tangent equilibrium
// analysis that decides growth vs shrinkage.
#pragma once

#include <stdexcept>

#include "vesmg/grid.hpp"

namespace vesmg {

struct ModelParams {
    double epsilon = 0.01;     // interface width
    double gamma_surf = 1.0;   // surface energy coefficient
    double gamma_bend = 0.05;  // bending energy coefficient
    double gamma_area = 5.0e4; // surface-area penalty coefficient
    double gamma_in = 1.0e5;   // interior osmotic curvature
    double gamma_out = 1.0e5;  // exterior osmotic curvature
    double psi_in = 0.3;       // interior well center
    double psi_out = 0.8;      // exterior well center
    double beta_in = 0.0;      // interior well offset
    double beta_out = 0.0;     // exterior well offset
    double m0 = 0.5;           // mobility depth, in (0,1)
    double m_phi = 1.0;        // Allen-Cahn mobility

    // Derived coefficients of the time-discrete scheme; always recomputed
    // from the base values.
    double gamma1() const { return gamma_surf * 1.0606601717798214; }  // 3 sqrt(2)/4
    double gamma2() const { return gamma_bend * 0.5303300858899107; }  // 3 sqrt(2)/8
    double gamma3() const { return gamma_area * 1.0606601717798214; }

    // Throws std::invalid_argument naming the offending field.
    void validate() const;

    bool operator==(const ModelParams&) const = default;
};

// g(x) = (x^2 - 1)^2 / 4 and derivatives.
inline double double_well(double x) {
    const double t = x * x - 1.0;
    return 0.25 * t * t;
}
inline double double_well_d1(double x) { return x * x * x - x; }
inline double double_well_d2(double x) { return 3.0 * x * x - 1.0; }

// p(x) = -x^3/2 + 3x/2; p(1) = 1, p(-1) = -1, p'(+-1) = 0.
inline double interp_p(double x) { return (1.5 - 0.5 * x * x) * x; }
inline double interp_p_d1(double x) { return 1.5 - 1.5 * x * x; }

// M_psi(phi) = 1 - m0 (phi^2 - 1)^2; requires m0 in (0,1) so the mobility
// stays positive on [-1, 1].
double mobility_psi(double phi, double m0);

inline double f_in(double psi, const ModelParams& p) {
    const double d = psi - p.psi_in;
    return 0.5 * p.gamma_in * d * d + p.beta_in;
}
inline double f_out(double psi, const ModelParams& p) {
    const double d = psi - p.psi_out;
    return 0.5 * p.gamma_out * d * d + p.beta_out;
}
inline double df_in(double psi, const ModelParams& p) { return p.gamma_in * (psi - p.psi_in); }
inline double df_out(double psi, const ModelParams& p) { return p.gamma_out * (psi - p.psi_out); }

// f_osm(phi, psi) = (1 + p(phi))/2 f_in(psi) + (1 - p(phi))/2 f_out(psi).
inline double osmotic_density(double phi, double psi, const ModelParams& p) {
    const double w = interp_p(phi);
    return 0.5 * (1.0 + w) * f_in(psi, p) + 0.5 * (1.0 - w) * f_out(psi, p);
}

struct EnergyReport {
    double f_surf = 0.0;
    double f_bend = 0.0;
    double f_area = 0.0;
    double f_osm = 0.0;
    double total = 0.0;
    double bh = 0.0; // raw surface quadrature B_h(phi), without gamma_surf
};

// Discrete energies of the state (phi, psi) against the area target A.
// F_bend uses the 5-point Laplacian at cell centers, consistent with the
// omega discretization of the scheme. Requires refreshed ghosts on both fields.
EnergyReport total_energies(const Field& phi, const Field& psi, const ModelParams& params,
                            double area_target);

struct TangentResult {
    double psi_in_star = 0.0;
    double psi_out_star = 0.0;
    double slope = 0.0;
};

struct NoTangentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Common tangent of the two quadratic wells, solved in closed form. The
// returned touch points satisfy psi_in_star < psi_out_star; otherwise
// NoTangentError is thrown.
TangentResult common_tangent(const ModelParams& params);

enum class Regime { growth, shrinkage, equilibrium };

// Growth if the initial interior concentration sits below its equilibrium
// value, shrinkage above, equilibrium within 1e-12 (the exterior is assumed
// initialized at psi_out_star).
Regime classify_regime(double psi0_in, const TangentResult& tangent);

} // namespace vesmg
