#include "vesmg/model.hpp"

#include <cmath>

#include "vesmg/summation.hpp"

namespace vesmg {

void ModelParams::validate() const {
    if (!(epsilon > 0.0))
        throw std::invalid_argument("model.epsilon must be positive");
    if (gamma_surf < 0.0 || gamma_bend < 0.0 || gamma_area < 0.0)
        throw std::invalid_argument("model.gamma_surf/gamma_bend/gamma_area must be >= 0");
    if (!(gamma_in > 0.0))
        throw std::invalid_argument("model.gamma_in must be positive");
    if (!(gamma_out > 0.0))
        throw std::invalid_argument("model.gamma_out must be positive");
    if (!(m0 > 0.0 && m0 < 1.0))
        throw std::invalid_argument("model.m0 must lie in the open interval (0,1)");
    if (!(m_phi > 0.0))
        throw std::invalid_argument("model.m_phi must be positive");
}

double mobility_psi(double phi, double m0) {
    if (!(m0 > 0.0 && m0 < 1.0))
        throw std::invalid_argument("mobility_psi: m0 must lie in (0,1)");
    const double t = phi * phi - 1.0;
    return 1.0 - m0 * t * t;
}

EnergyReport total_energies(const Field& phi, const Field& psi, const ModelParams& params,
                            double area_target) {
    const GridSpec& spec = phi.spec();
    const double h = spec.h;
    const double eps = params.epsilon;
    const double inv_eps = 1.0 / eps;
    const double inv_h2 = 1.0 / (h * h);
    const double bend_density = 3.0 * 1.4142135623730951 / (16.0 * eps); // 3 sqrt(2)/(16 eps)

    EnergyReport rep;
    rep.bh = surface_quadrature(phi, eps);
    rep.f_surf = params.gamma_surf * rep.bh;

    CompensatedSum bend, osm;
    for (int j = 1; j <= spec.n; ++j) {
        const double* rp = phi.row(j);
        const double* rpn = phi.row(j + 1);
        const double* rps = phi.row(j - 1);
        const double* rq = psi.row(j);
        for (int i = 1; i <= spec.m; ++i) {
            const double lap = inv_h2 * (rp[i + 1] + rp[i - 1] + rpn[i] + rps[i] - 4.0 * rp[i]);
            const double w = inv_eps * double_well_d1(rp[i]) - eps * lap;
            bend.add(w * w);
            osm.add(osmotic_density(rp[i], rq[i], params));
        }
    }
    rep.f_bend = params.gamma_bend * bend_density * h * h * bend.value();
    rep.f_osm = h * h * osm.value();
    const double excess = rep.bh - area_target;
    rep.f_area = 0.5 * params.gamma_area * excess * excess;
    rep.total = rep.f_surf + rep.f_bend + rep.f_area + rep.f_osm;
    return rep;
}

TangentResult common_tangent(const ModelParams& params) {
    const double gi = params.gamma_in;
    const double go = params.gamma_out;
    const double a = params.psi_in;
    const double b = params.psi_out;
    const double bi = params.beta_in;
    const double bo = params.beta_out;

    // A line y = s psi + c touches f_in at psi1 = a + s/gi and f_out at
    // psi2 = b + s/go. Equating the two intercepts gives
    //   q s^2 + (b - a) s + (bi - bo) = 0,  q = 1/(2 go) - 1/(2 gi),
    // and at any root psi2 - psi1 = (b - a) + 2 q s.
    const double q = 0.5 / go - 0.5 / gi;
    double slope = 0.0;
    if (q == 0.0) {
        if (!(b > a))
            throw NoTangentError("common_tangent: equal curvatures need psi_in < psi_out");
        slope = (bo - bi) / (b - a);
    } else {
        const double disc = (b - a) * (b - a) - 4.0 * q * (bi - bo);
        if (disc < 0.0)
            throw NoTangentError("common_tangent: negative discriminant, no common tangent");
        // The root with +sqrt(disc) is the one with psi2 - psi1 = sqrt(disc) > 0.
        slope = (-(b - a) + std::sqrt(disc)) / (2.0 * q);
    }

    TangentResult t;
    t.slope = slope;
    t.psi_in_star = a + slope / gi;
    t.psi_out_star = b + slope / go;
    if (!(t.psi_in_star < t.psi_out_star))
        throw NoTangentError("common_tangent: touch points not ordered psi_in_star < psi_out_star");
    return t;
}

Regime classify_regime(double psi0_in, const TangentResult& tangent) {
    const double d = psi0_in - tangent.psi_in_star;
    if (std::abs(d) <= 1e-12)
        return Regime::equilibrium;
    return d < 0.0 ? Regime::growth : Regime::shrinkage;
}

} // namespace vesmg
