#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "vesmg/grid.hpp"
#include "vesmg/summation.hpp"

using namespace vesmg;

namespace {

Field random_field(const GridSpec& spec, unsigned seed, double lo = -1.0, double hi = 1.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    Field f(spec);
    for (int j = 1; j <= spec.n; ++j)
        for (int i = 1; i <= spec.m; ++i)
            f(i, j) = dist(rng);
    return f;
}

Field transpose(const Field& f) {
    const GridSpec& s = f.spec();
    Field t(GridSpec::make(s.n, s.m, s.h));
    for (int j = 0; j <= s.n + 1; ++j)
        for (int i = 0; i <= s.m + 1; ++i)
            t(j, i) = f(i, j);
    return t;
}

} // namespace

TEST_CASE("grid spec invariants") {
    GridSpec s = GridSpec::make(128, 64, 1.0 / 128);
    CHECK(s.lx == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.ly == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.cell_x(1) == doctest::Approx(0.5 / 128));
    CHECK_THROWS_AS(GridSpec::make(0, 4, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec::make(4, 4, -0.1), std::invalid_argument);
    CHECK(s.coarsenable());
    GridSpec c = s.coarsened();
    CHECK(c.m == 64);
    CHECK(c.n == 32);
    CHECK(c.h == doctest::Approx(2.0 / 128));
    CHECK_FALSE(GridSpec::make(6, 6, 0.1).coarsened().coarsenable());
}

TEST_CASE("neumann ghosts mirror the adjacent interior cells") {
    SUBCASE("constant field") {
        Field f(GridSpec::make(5, 4, 0.25));
        for (int j = 1; j <= 4; ++j)
            for (int i = 1; i <= 5; ++i)
                f(i, j) = 3.75;
        apply_neumann_bc(f);
        for (int j = 0; j <= 5; ++j)
            for (int i = 0; i <= 6; ++i)
                CHECK(f(i, j) == 3.75);
    }
    SUBCASE("3x3 column mirrors literally") {
        Field f(GridSpec::make(3, 3, 1.0));
        f(1, 1) = 1.0;
        f(1, 2) = 2.0;
        f(1, 3) = 3.0;
        apply_neumann_bc(f);
        CHECK(f(0, 1) == 1.0);
        CHECK(f(0, 2) == 2.0);
        CHECK(f(0, 3) == 3.0);
    }
    SUBCASE("random 4x4, all ghost cells bitwise equal to neighbors") {
        Field f = random_field(GridSpec::make(4, 4, 0.25), 17);
        Field before = f;
        apply_neumann_bc(f);
        for (int j = 1; j <= 4; ++j) {
            CHECK(f(0, j) == f(1, j));
            CHECK(f(5, j) == f(4, j));
        }
        for (int i = 0; i <= 5; ++i) {
            CHECK(f(i, 0) == f(i, 1));
            CHECK(f(i, 5) == f(i, 4));
        }
        // corners equal the diagonal interior neighbor
        CHECK(f(0, 0) == f(1, 1));
        CHECK(f(5, 5) == f(4, 4));
        CHECK(f(0, 5) == f(1, 4));
        CHECK(f(5, 0) == f(4, 1));
        for (int j = 1; j <= 4; ++j)
            for (int i = 1; i <= 4; ++i)
                CHECK(f(i, j) == before(i, j)); // interior untouched
    }
}

TEST_CASE("center-to-edge average") {
    SUBCASE("constant") {
        Field f(GridSpec::make(4, 3, 0.5));
        f.fill(2.5);
        EdgeFieldEW ax = center_to_edge_avg_x(f);
        EdgeFieldNS ay = center_to_edge_avg_y(f);
        for (int j = 1; j <= 3; ++j)
            for (int i = 0; i <= 4; ++i)
                CHECK(ax.at(i, j) == 2.5);
        for (int j = 0; j <= 3; ++j)
            for (int i = 1; i <= 4; ++i)
                CHECK(ay.at(i, j) == 2.5);
    }
    SUBCASE("linear function averaged, h = 1, m = 2") {
        GridSpec s = GridSpec::make(2, 2, 1.0);
        Field f(s);
        for (int j = 0; j <= 3; ++j)
            for (int i = 0; i <= 3; ++i)
                f(i, j) = s.cell_x(i);
        EdgeFieldEW ax = center_to_edge_avg_x(f);
        CHECK(ax.at(1, 1) == doctest::Approx(1.0).epsilon(1e-15)); // (0.5 + 1.5)/2
    }
    SUBCASE("random field matches brute-force loop") {
        GridSpec s = GridSpec::make(6, 5, 0.125);
        Field f = random_field(s, 23);
        apply_neumann_bc(f);
        EdgeFieldEW ax = center_to_edge_avg_x(f);
        EdgeFieldNS ay = center_to_edge_avg_y(f);
        for (int j = 1; j <= s.n; ++j)
            for (int i = 0; i <= s.m; ++i)
                CHECK(ax.at(i, j) == 0.5 * (f(i, j) + f(i + 1, j)));
        for (int j = 0; j <= s.n; ++j)
            for (int i = 1; i <= s.m; ++i)
                CHECK(ay.at(i, j) == 0.5 * (f(i, j) + f(i, j + 1)));
    }
}

TEST_CASE("center-to-edge difference") {
    SUBCASE("constant gives zero") {
        Field f(GridSpec::make(4, 4, 0.5));
        f.fill(-1.25);
        EdgeFieldEW dx = center_to_edge_diff_x(f);
        for (int j = 1; j <= 4; ++j)
            for (int i = 0; i <= 4; ++i)
                CHECK(dx.at(i, j) == 0.0);
    }
    SUBCASE("exact for linear, h = 0.5") {
        GridSpec s = GridSpec::make(4, 4, 0.5);
        Field f(s);
        for (int j = 0; j <= 5; ++j)
            for (int i = 0; i <= 5; ++i)
                f(i, j) = s.cell_x(i);
        EdgeFieldEW dx = center_to_edge_diff_x(f);
        for (int j = 1; j <= 4; ++j)
            for (int i = 1; i < 4; ++i)
                CHECK(dx.at(i, j) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("mirrored ghosts force zero boundary differences") {
        GridSpec s = GridSpec::make(5, 6, 0.2);
        Field f = random_field(s, 31);
        apply_neumann_bc(f);
        EdgeFieldEW dx = center_to_edge_diff_x(f);
        EdgeFieldNS dy = center_to_edge_diff_y(f);
        for (int j = 1; j <= s.n; ++j) {
            CHECK(dx.at(0, j) == 0.0);
            CHECK(dx.at(s.m, j) == 0.0);
        }
        for (int i = 1; i <= s.m; ++i) {
            CHECK(dy.at(i, 0) == 0.0);
            CHECK(dy.at(i, s.n) == 0.0);
        }
    }
}

TEST_CASE("edge-to-center divergence") {
    GridSpec s = GridSpec::make(6, 4, 0.25);
    SUBCASE("constant edge fields give zero") {
        EdgeFieldEW fx(s, 2.0);
        EdgeFieldNS fy(s, 2.0);
        Field d = edge_to_center_div(fx, fy);
        for (int j = 1; j <= s.n; ++j)
            for (int i = 1; i <= s.m; ++i)
                CHECK(d(i, j) == 0.0);
    }
    SUBCASE("discrete divergence theorem: zero-flux boundaries telescope to zero") {
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        EdgeFieldEW fx(s);
        EdgeFieldNS fy(s);
        for (int j = 1; j <= s.n; ++j)
            for (int i = 1; i < s.m; ++i)
                fx.at(i, j) = dist(rng);
        for (int j = 1; j < s.n; ++j)
            for (int i = 1; i <= s.m; ++i)
                fy.at(i, j) = dist(rng);
        Field d = edge_to_center_div(fx, fy);
        CHECK(std::abs(interior_mass(d)) < 1e-14);
    }
    SUBCASE("random fields match the component formula") {
        std::mt19937 rng(6);
        std::uniform_real_distribution<double> dist(-2.0, 2.0);
        EdgeFieldEW fx(s);
        EdgeFieldNS fy(s);
        for (int j = 1; j <= s.n; ++j)
            for (int i = 0; i <= s.m; ++i)
                fx.at(i, j) = dist(rng);
        for (int j = 0; j <= s.n; ++j)
            for (int i = 1; i <= s.m; ++i)
                fy.at(i, j) = dist(rng);
        Field d = edge_to_center_div(fx, fy);
        for (int j = 1; j <= s.n; ++j)
            for (int i = 1; i <= s.m; ++i) {
                const double expect = (fx.at(i, j) - fx.at(i - 1, j)) / s.h +
                                      (fy.at(i, j) - fy.at(i, j - 1)) / s.h;
                CHECK(d(i, j) == doctest::Approx(expect).epsilon(1e-14));
            }
    }
}

TEST_CASE("laplacian") {
    SUBCASE("constant with mirrored ghosts gives zero") {
        Field f(GridSpec::make(4, 4, 0.1));
        f.fill(0.7);
        apply_neumann_bc(f);
        Field l = laplacian(f);
        for (int j = 1; j <= 4; ++j)
            for (int i = 1; i <= 4; ++i)
                CHECK(l(i, j) == 0.0);
    }
    SUBCASE("3x3 center spike, h = 1") {
        Field f(GridSpec::make(3, 3, 1.0));
        f(2, 2) = 1.0;
        apply_neumann_bc(f);
        Field l = laplacian(f);
        CHECK(l(2, 2) == -4.0);
        CHECK(l(1, 2) == 1.0);
        CHECK(l(3, 2) == 1.0);
        CHECK(l(2, 1) == 1.0);
        CHECK(l(2, 3) == 1.0);
        CHECK(l(1, 1) == 0.0);
        CHECK(l(3, 3) == 0.0);
    }
    SUBCASE("equals the composition d(D(.)) bitwise") {
        GridSpec s = GridSpec::make(9, 7, 1.0 / 9);
        Field f = random_field(s, 77);
        apply_neumann_bc(f);
        Field a = laplacian(f);
        Field b = edge_to_center_div(center_to_edge_diff_x(f), center_to_edge_diff_y(f));
        for (int j = 1; j <= s.n; ++j)
            for (int i = 1; i <= s.m; ++i)
                CHECK(a(i, j) == b(i, j));
    }
    SUBCASE("summation by parts against the edge gradient") {
        GridSpec s = GridSpec::make(12, 10, 1.0 / 12);
        Field f = random_field(s, 91);
        Field g = random_field(s, 92);
        apply_neumann_bc(f);
        apply_neumann_bc(g);
        Field lg = laplacian(g);
        CompensatedSum lhs;
        for (int j = 1; j <= s.n; ++j)
            for (int i = 1; i <= s.m; ++i)
                lhs.add(f(i, j) * lg(i, j));
        EdgeFieldEW dfx = center_to_edge_diff_x(f);
        EdgeFieldEW dgx = center_to_edge_diff_x(g);
        EdgeFieldNS dfy = center_to_edge_diff_y(f);
        EdgeFieldNS dgy = center_to_edge_diff_y(g);
        CompensatedSum rhs;
        for (int j = 1; j <= s.n; ++j)
            for (int i = 0; i <= s.m; ++i)
                rhs.add(dfx.at(i, j) * dgx.at(i, j));
        for (int j = 0; j <= s.n; ++j)
            for (int i = 1; i <= s.m; ++i)
                rhs.add(dfy.at(i, j) * dgy.at(i, j));
        const double scale = std::max(std::abs(lhs.value()), std::abs(rhs.value()));
        CHECK(std::abs(lhs.value() + rhs.value()) <= 1e-12 * std::max(1.0, scale));
    }
    SUBCASE("commutes with the grid transpose") {
        GridSpec s = GridSpec::make(8, 8, 0.125);
        Field f = random_field(s, 55);
        apply_neumann_bc(f);
        Field lt = laplacian(transpose(f));
        Field tl = transpose(laplacian(f));
        for (int j = 1; j <= s.n; ++j)
            for (int i = 1; i <= s.m; ++i)
                CHECK(lt(i, j) == doctest::Approx(tl(i, j)).epsilon(1e-14));
    }
}

TEST_CASE("surface quadrature") {
    SUBCASE("phi = 1 gives zero") {
        Field f(GridSpec::make(8, 8, 0.125));
        f.fill(1.0);
        apply_neumann_bc(f);
        CHECK(surface_quadrature(f, 0.02) == 0.0);
    }
    SUBCASE("phi = 0 on the unit square") {
        const double eps = 0.03;
        Field f(GridSpec::make(16, 16, 1.0 / 16));
        f.fill(0.0);
        apply_neumann_bc(f);
        const double expect = (3.0 * std::sqrt(2.0) / 4.0) / (4.0 * eps);
        CHECK(surface_quadrature(f, eps) == doctest::Approx(expect).epsilon(1e-13));
    }
    SUBCASE("rejects non-positive interface width") {
        Field f(GridSpec::make(4, 4, 0.25));
        CHECK_THROWS_AS(surface_quadrature(f, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(surface_quadrature(f, -1.0), std::invalid_argument);
    }
    SUBCASE("tanh circle approximates the interface perimeter") {
        const double eps = 0.02, r = 0.25;
        GridSpec s = GridSpec::make(128, 128, 1.0 / 128);
        Field f(s);
        for (int j = 1; j <= s.n; ++j)
            for (int i = 1; i <= s.m; ++i) {
                const double dx = s.cell_x(i) - 0.5;
                const double dy = s.cell_y(j) - 0.5;
                f(i, j) = std::tanh((r - std::sqrt(dx * dx + dy * dy)) / (std::sqrt(2.0) * eps));
            }
        apply_neumann_bc(f);
        const double perimeter = 2.0 * 3.14159265358979323846 * r;
        CHECK(surface_quadrature(f, eps) ==
              doctest::Approx(perimeter).epsilon(0.02));
    }
    SUBCASE("invariant under transpose on square grids") {
        GridSpec s = GridSpec::make(10, 10, 0.1);
        Field f = random_field(s, 12);
        apply_neumann_bc(f);
        const double a = surface_quadrature(f, 0.05);
        const double b = surface_quadrature(transpose(f), 0.05);
        CHECK(a == doctest::Approx(b).epsilon(1e-13));
    }
    SUBCASE("prefactor scales the result") {
        GridSpec s = GridSpec::make(6, 6, 1.0 / 6);
        Field f = random_field(s, 3);
        apply_neumann_bc(f);
        CHECK(surface_quadrature(f, 0.05, 2.0) ==
              doctest::Approx(2.0 * surface_quadrature(f, 0.05)).epsilon(1e-15));
    }
}

TEST_CASE("field snapshot io round-trips") {
    GridSpec s = GridSpec::make(7, 5, 1.0 / 7);
    Field f = random_field(s, 101, -3.0, 3.0);
    std::stringstream ss;
    write_field(ss, f);

    // header carries m n h
    int m, n;
    double h;
    std::stringstream header(ss.str().substr(0, ss.str().find('\n')));
    header >> m >> n >> h;
    CHECK(m == 7);
    CHECK(n == 5);
    CHECK(h == doctest::Approx(1.0 / 7).epsilon(1e-16));

    Field g = read_field(ss);
    CHECK(g.spec() == f.spec());
    for (int j = 1; j <= s.n; ++j)
        for (int i = 1; i <= s.m; ++i)
            CHECK(g(i, j) == f(i, j));

    std::stringstream bad("3 3"); // truncated header
    CHECK_THROWS_AS(read_field(bad), std::runtime_error);
}
