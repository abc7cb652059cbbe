// grid.hpp -- cell-centered grid functions with a one-cell ghost layer and
// the finite-difference operators acting on them: Neumann mirroring, the
// center-to-edge averages/differences, edge-to-center divergence, the
// standard 5-point Laplacian, and the surface-energy quadrature B_h.
#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace vesmg {

// Uniform cell-centered grid: m x n interior cells of spacing h covering
// (0, lx) x (0, ly) with lx = m*h, ly = n*h. Cell centers sit at
// x_i = (i - 1/2) h, y_j = (j - 1/2) h for i = 1..m, j = 1..n.
struct GridSpec {
    int m = 0;
    int n = 0;
    double h = 0.0;
    double lx = 0.0;
    double ly = 0.0;

    static GridSpec make(int m, int n, double h);

    double cell_x(int i) const { return (i - 0.5) * h; }
    double cell_y(int j) const { return (j - 0.5) * h; }

    bool coarsenable() const { return m % 2 == 0 && n % 2 == 0 && m >= 4 && n >= 4; }
    GridSpec coarsened() const;

    bool operator==(const GridSpec&) const = default;
};

// Scalar grid function on the extended index set i = 0..m+1, j = 0..n+1;
// i,j in 1..m x 1..n are interior cells, the rest is the ghost layer.
class Field {
public:
    Field() = default;
    explicit Field(const GridSpec& spec, double fill = 0.0)
        : spec_(spec),
          v_(static_cast<std::size_t>(spec.m + 2) * static_cast<std::size_t>(spec.n + 2), fill) {}

    const GridSpec& spec() const { return spec_; }
    int stride() const { return spec_.m + 2; }

    double& operator()(int i, int j) { return v_[static_cast<std::size_t>(j) * (spec_.m + 2) + i]; }
    double operator()(int i, int j) const { return v_[static_cast<std::size_t>(j) * (spec_.m + 2) + i]; }

    double* row(int j) { return v_.data() + static_cast<std::size_t>(j) * (spec_.m + 2); }
    const double* row(int j) const { return v_.data() + static_cast<std::size_t>(j) * (spec_.m + 2); }

    void fill(double value) { v_.assign(v_.size(), value); }

    bool same_shape(const Field& other) const { return spec_ == other.spec_; }

private:
    GridSpec spec_;
    std::vector<double> v_;
};

// East-west edge-centered function: values f_{i+1/2, j} for i = 0..m, j = 1..n.
class EdgeFieldEW {
public:
    EdgeFieldEW() = default;
    explicit EdgeFieldEW(const GridSpec& spec, double fill = 0.0)
        : spec_(spec),
          v_(static_cast<std::size_t>(spec.m + 1) * static_cast<std::size_t>(spec.n), fill) {}

    const GridSpec& spec() const { return spec_; }

    // at(i, j) addresses the edge (i+1/2, j); i in 0..m, j in 1..n.
    double& at(int i, int j) { return v_[static_cast<std::size_t>(j - 1) * (spec_.m + 1) + i]; }
    double at(int i, int j) const { return v_[static_cast<std::size_t>(j - 1) * (spec_.m + 1) + i]; }

    double* row(int j) { return v_.data() + static_cast<std::size_t>(j - 1) * (spec_.m + 1); }
    const double* row(int j) const { return v_.data() + static_cast<std::size_t>(j - 1) * (spec_.m + 1); }

private:
    GridSpec spec_;
    std::vector<double> v_;
};

// North-south edge-centered function: values f_{i, j+1/2} for i = 1..m, j = 0..n.
class EdgeFieldNS {
public:
    EdgeFieldNS() = default;
    explicit EdgeFieldNS(const GridSpec& spec, double fill = 0.0)
        : spec_(spec),
          v_(static_cast<std::size_t>(spec.m) * static_cast<std::size_t>(spec.n + 1), fill) {}

    const GridSpec& spec() const { return spec_; }

    // at(i, j) addresses the edge (i, j+1/2); i in 1..m, j in 0..n.
    double& at(int i, int j) { return v_[static_cast<std::size_t>(j) * spec_.m + (i - 1)]; }
    double at(int i, int j) const { return v_[static_cast<std::size_t>(j) * spec_.m + (i - 1)]; }

    // row(j) points at the i = 1 entry of edge row j+1/2; index with [i-1].
    double* row(int j) { return v_.data() + static_cast<std::size_t>(j) * spec_.m; }
    const double* row(int j) const { return v_.data() + static_cast<std::size_t>(j) * spec_.m; }

private:
    GridSpec spec_;
    std::vector<double> v_;
};

// Mirror interior values into the ghost layer (homogeneous Neumann):
// f_{0,j} = f_{1,j}, f_{m+1,j} = f_{m,j} for j = 1..n, then
// f_{i,0} = f_{i,1}, f_{i,n+1} = f_{i,n} for i = 0..m+1.
// The y-rule runs after the x-rule, so corner ghosts equal the diagonal
// interior neighbor. Interior values are untouched.
void apply_neumann_bc(Field& f);

// Center-to-edge average A and difference D operators. Inputs must carry
// ghost values (the i = 0 and i = m edges read them).
EdgeFieldEW center_to_edge_avg_x(const Field& f);
EdgeFieldNS center_to_edge_avg_y(const Field& f);
EdgeFieldEW center_to_edge_diff_x(const Field& f);
EdgeFieldNS center_to_edge_diff_y(const Field& f);

// Edge-to-center divergence d_x fx + d_y fy on interior cells. Ghosts of
// the result are left at zero.
Field edge_to_center_div(const EdgeFieldEW& fx, const EdgeFieldNS& fy);

// Standard 5-point Laplacian on interior cells; requires ghosts. Same
// values as edge_to_center_div(center_to_edge_diff_x(f), center_to_edge_diff_y(f)).
Field laplacian(const Field& f);

// B_h: h^2 sum over interior cells of
//   prefactor * (3 sqrt(2)/4) [ g(f)/eps + (eps/2) ((c_x f)^2 + (c_y f)^2) ]
// with the one-sided differences c_x f = (f_{i+1,j} - f_{i,j})/h (reads the
// ghost column/row at i = m, j = n). Throws std::invalid_argument for eps <= 0.
double surface_quadrature(const Field& phi, double eps, double prefactor = 1.0);

// h^2-weighted interior sum (compensated).
double interior_sum(const Field& f);
double interior_mass(const Field& f);

// Field snapshot format: one header line "m n h" followed by the interior
// values, one grid row (j fixed, i = 1..m) per line, full precision.
void write_field(std::ostream& os, const Field& f);
Field read_field(std::istream& is);
void write_field_file(const std::string& path, const Field& f);
Field read_field_file(const std::string& path);

} // namespace vesmg
