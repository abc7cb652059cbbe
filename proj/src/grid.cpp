#include "vesmg/grid.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "vesmg/summation.hpp"

namespace vesmg {

namespace {
constexpr double kSurfPrefactor = 3.0 * 1.4142135623730951 / 4.0; // 3 sqrt(2) / 4

double g_well(double x) {
    const double t = x * x - 1.0;
    return 0.25 * t * t;
}
} // namespace

GridSpec GridSpec::make(int m, int n, double h) {
    if (m < 1 || n < 1)
        throw std::invalid_argument("GridSpec: m and n must be positive");
    if (!(h > 0.0))
        throw std::invalid_argument("GridSpec: h must be positive");
    GridSpec s;
    s.m = m;
    s.n = n;
    s.h = h;
    s.lx = m * h;
    s.ly = n * h;
    return s;
}

GridSpec GridSpec::coarsened() const {
    if (m % 2 != 0 || n % 2 != 0)
        throw std::invalid_argument("GridSpec: cannot coarsen odd cell counts");
    return GridSpec::make(m / 2, n / 2, 2.0 * h);
}

void apply_neumann_bc(Field& f) {
    const int m = f.spec().m;
    const int n = f.spec().n;
    for (int j = 1; j <= n; ++j) {
        double* r = f.row(j);
        r[0] = r[1];
        r[m + 1] = r[m];
    }
    const double* r1 = f.row(1);
    const double* rn = f.row(n);
    double* r0 = f.row(0);
    double* rn1 = f.row(n + 1);
    for (int i = 0; i <= m + 1; ++i) {
        r0[i] = r1[i];
        rn1[i] = rn[i];
    }
}

EdgeFieldEW center_to_edge_avg_x(const Field& f) {
    const int m = f.spec().m;
    const int n = f.spec().n;
    EdgeFieldEW out(f.spec());
    for (int j = 1; j <= n; ++j) {
        const double* r = f.row(j);
        double* e = out.row(j);
        for (int i = 0; i <= m; ++i)
            e[i] = 0.5 * (r[i] + r[i + 1]);
    }
    return out;
}

EdgeFieldNS center_to_edge_avg_y(const Field& f) {
    const int m = f.spec().m;
    const int n = f.spec().n;
    EdgeFieldNS out(f.spec());
    for (int j = 0; j <= n; ++j) {
        const double* r = f.row(j);
        const double* rn = f.row(j + 1);
        double* e = out.row(j);
        for (int i = 1; i <= m; ++i)
            e[i - 1] = 0.5 * (r[i] + rn[i]);
    }
    return out;
}

EdgeFieldEW center_to_edge_diff_x(const Field& f) {
    const int m = f.spec().m;
    const int n = f.spec().n;
    const double inv_h = 1.0 / f.spec().h;
    EdgeFieldEW out(f.spec());
    for (int j = 1; j <= n; ++j) {
        const double* r = f.row(j);
        double* e = out.row(j);
        for (int i = 0; i <= m; ++i)
            e[i] = inv_h * (r[i + 1] - r[i]);
    }
    return out;
}

EdgeFieldNS center_to_edge_diff_y(const Field& f) {
    const int m = f.spec().m;
    const int n = f.spec().n;
    const double inv_h = 1.0 / f.spec().h;
    EdgeFieldNS out(f.spec());
    for (int j = 0; j <= n; ++j) {
        const double* r = f.row(j);
        const double* rn = f.row(j + 1);
        double* e = out.row(j);
        for (int i = 1; i <= m; ++i)
            e[i - 1] = inv_h * (rn[i] - r[i]);
    }
    return out;
}

Field edge_to_center_div(const EdgeFieldEW& fx, const EdgeFieldNS& fy) {
    if (!(fx.spec() == fy.spec()))
        throw std::invalid_argument("edge_to_center_div: edge fields on different grids");
    const GridSpec& spec = fx.spec();
    const double inv_h = 1.0 / spec.h;
    Field out(spec);
    for (int j = 1; j <= spec.n; ++j) {
        const double* ex = fx.row(j);
        const double* eyn = fy.row(j);
        const double* eys = fy.row(j - 1);
        double* r = out.row(j);
        for (int i = 1; i <= spec.m; ++i)
            r[i] = inv_h * ((ex[i] - ex[i - 1]) + (eyn[i - 1] - eys[i - 1]));
    }
    return out;
}

Field laplacian(const Field& f) {
    const int m = f.spec().m;
    const int n = f.spec().n;
    const double inv_h = 1.0 / f.spec().h;
    Field out(f.spec());
    // Grouped as d_x(D_x f) + d_y(D_y f) so the composition identity with the
    // edge operators holds bitwise, not just algebraically.
    for (int j = 1; j <= n; ++j) {
        const double* r = f.row(j);
        const double* rn = f.row(j + 1);
        const double* rs = f.row(j - 1);
        double* o = out.row(j);
        for (int i = 1; i <= m; ++i) {
            const double dxe = inv_h * (r[i + 1] - r[i]);
            const double dxw = inv_h * (r[i] - r[i - 1]);
            const double dyn = inv_h * (rn[i] - r[i]);
            const double dys = inv_h * (r[i] - rs[i]);
            o[i] = inv_h * ((dxe - dxw) + (dyn - dys));
        }
    }
    return out;
}

double surface_quadrature(const Field& phi, double eps, double prefactor) {
    if (!(eps > 0.0))
        throw std::invalid_argument("surface_quadrature: eps must be positive");
    const int m = phi.spec().m;
    const int n = phi.spec().n;
    const double h = phi.spec().h;
    const double inv_h = 1.0 / h;
    const double inv_eps = 1.0 / eps;
    CompensatedSum acc;
    for (int j = 1; j <= n; ++j) {
        const double* r = phi.row(j);
        const double* rn = phi.row(j + 1);
        for (int i = 1; i <= m; ++i) {
            const double cx = (r[i + 1] - r[i]) * inv_h;
            const double cy = (rn[i] - r[i]) * inv_h;
            acc.add(g_well(r[i]) * inv_eps + 0.5 * eps * (cx * cx + cy * cy));
        }
    }
    return prefactor * kSurfPrefactor * h * h * acc.value();
}

double interior_sum(const Field& f) {
    CompensatedSum acc;
    for (int j = 1; j <= f.spec().n; ++j) {
        const double* r = f.row(j);
        for (int i = 1; i <= f.spec().m; ++i)
            acc.add(r[i]);
    }
    return acc.value();
}

double interior_mass(const Field& f) {
    return f.spec().h * f.spec().h * interior_sum(f);
}

void write_field(std::ostream& os, const Field& f) {
    os << f.spec().m << ' ' << f.spec().n << ' '
       << std::setprecision(std::numeric_limits<double>::max_digits10) << std::scientific
       << f.spec().h << '\n';
    for (int j = 1; j <= f.spec().n; ++j) {
        const double* r = f.row(j);
        for (int i = 1; i <= f.spec().m; ++i) {
            os << r[i];
            os << (i == f.spec().m ? '\n' : ' ');
        }
    }
}

Field read_field(std::istream& is) {
    int m = 0, n = 0;
    double h = 0.0;
    if (!(is >> m >> n >> h))
        throw std::runtime_error("read_field: malformed header (expected: m n h)");
    Field f(GridSpec::make(m, n, h));
    for (int j = 1; j <= n; ++j) {
        double* r = f.row(j);
        for (int i = 1; i <= m; ++i) {
            if (!(is >> r[i]))
                throw std::runtime_error("read_field: truncated value block");
        }
    }
    return f;
}

void write_field_file(const std::string& path, const Field& f) {
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("write_field_file: cannot open " + path);
    write_field(os, f);
    if (!os)
        throw std::runtime_error("write_field_file: write failed for " + path);
}

Field read_field_file(const std::string& path) {
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("read_field_file: cannot open " + path);
    return read_field(is);
}

} // namespace vesmg
