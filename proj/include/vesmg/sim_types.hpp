// sim_types.hpp -- initial-condition descriptions and per-step diagnostics.
#pragma once

#include <string>

namespace vesmg {

enum class IcKind { tanh_ellipse, star };

// phi^0 profiles at cell centers:
//   tanh_ellipse: tanh((radius - sqrt(xscale (x-cx)^2 + yscale (y-cy)^2)) / (sqrt(2) eps))
//   star:         tanh((r(theta) - rho) / (sqrt(2) eps)),
//                 r(theta) = radius + amplitude cos(mode theta),
//                 (rho, theta) polar about the center.
// psi^0 = psi_slope * phi^0 + psi_offset.
// presmooth_steps > 0 starts instead from the sharp +-1 indicator of the
// same geometry, relaxed by that many Cahn-Hilliard steps of size
// presmooth_dt_factor * h^2.
struct InitialCondition {
    IcKind kind = IcKind::star;
    double center_x = 0.5;
    double center_y = 0.5;
    double radius = 0.18;
    double xscale = 0.75;
    double yscale = 1.0;
    double amplitude = 0.03;
    int mode = 10;
    double psi_slope = -0.35;
    double psi_offset = 0.45;
    int presmooth_steps = 0;
    double presmooth_dt_factor = 0.1;

    bool operator==(const InitialCondition&) const = default;
};

struct DiagnosticsRow {
    double time = 0.0;
    double f_surf = 0.0;
    double f_bend = 0.0;
    double f_area = 0.0;
    double f_osm = 0.0;
    double f_total = 0.0;
    double bh = 0.0;
    double total_mass = 0.0;
    double inner_mass = 0.0;
    double outer_mass = 0.0;
    double inner_conc = 0.0;
    double outer_conc = 0.0;
    int vcycles = 0;
};

inline const char* diagnostics_csv_header() {
    return "time,F_surf,F_bend,F_area,F_osm,F_total,B_h,total_mass,inner_mass,outer_mass,"
           "inner_conc,outer_conc,vcycle_count";
}

} // namespace vesmg
