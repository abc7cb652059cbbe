#include <doctest.h>

#include <cmath>
#include <random>

#include "vesmg/multigrid.hpp"

using namespace vesmg;

namespace {

ModelParams growth_params() {
    ModelParams p; // defaults are the growth set
    p.epsilon = 0.04;
    return p;
}

Field random_field(const GridSpec& spec, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Field f(spec);
    for (int j = 1; j <= spec.n; ++j)
        for (int i = 1; i <= spec.m; ++i)
            f(i, j) = dist(rng);
    apply_neumann_bc(f);
    return f;
}

// Smooth-ish interface state used as nontrivial solver input.
State interface_state(const GridSpec& spec, double eps) {
    State st(spec);
    for (int j = 1; j <= spec.n; ++j)
        for (int i = 1; i <= spec.m; ++i) {
            const double dx = spec.cell_x(i) - 0.5;
            const double dy = spec.cell_y(j) - 0.5;
            const double d = 0.25 - std::sqrt(dx * dx + dy * dy);
            st.phi(i, j) = std::tanh(d / (std::sqrt(2.0) * eps));
            st.psi(i, j) = -0.35 * st.phi(i, j) + 0.45;
        }
    refresh_ghosts(st);
    return st;
}

} // namespace

TEST_CASE("cell-average restriction") {
    SUBCASE("constants restrict to constants") {
        Field f(GridSpec::make(8, 8, 0.125));
        f.fill(4.25);
        Field c = restrict_field(f);
        CHECK(c.spec().m == 4);
        CHECK(c.spec().h == 0.25);
        for (int j = 1; j <= 4; ++j)
            for (int i = 1; i <= 4; ++i)
                CHECK(c(i, j) == 4.25);
    }
    SUBCASE("2x2 block mean") {
        Field f(GridSpec::make(2, 2, 0.5));
        f(1, 1) = 1.0;
        f(2, 1) = 2.0;
        f(1, 2) = 3.0;
        f(2, 2) = 4.0;
        Field c = restrict_field(f);
        CHECK(c(1, 1) == 2.5);
    }
    SUBCASE("h^2-weighted sums are preserved") {
        Field f = random_field(GridSpec::make(16, 12, 1.0 / 16), 3);
        Field c = restrict_field(f);
        CHECK(interior_mass(c) == doctest::Approx(interior_mass(f)).epsilon(1e-13));
    }
    SUBCASE("dimension mismatch is an error") {
        Field f(GridSpec::make(8, 8, 0.125));
        Field wrong(GridSpec::make(2, 2, 0.5));
        CHECK_THROWS_AS(restrict_into(f, wrong), std::invalid_argument);
        Field odd(GridSpec::make(5, 5, 0.2));
        CHECK_THROWS_AS(restrict_field(odd), std::invalid_argument);
    }
}

TEST_CASE("piecewise-constant prolongation") {
    SUBCASE("children copy the parent") {
        Field c(GridSpec::make(2, 2, 0.5));
        c(1, 1) = 1.0;
        c(2, 1) = 2.0;
        c(1, 2) = 3.0;
        c(2, 2) = 4.0;
        Field f = prolong_field(c);
        CHECK(f.spec().m == 4);
        CHECK(f(1, 1) == 1.0);
        CHECK(f(2, 2) == 1.0);
        CHECK(f(3, 1) == 2.0);
        CHECK(f(1, 3) == 3.0);
        CHECK(f(4, 4) == 4.0);
    }
    SUBCASE("restrict after prolong is the exact identity") {
        Field c = random_field(GridSpec::make(6, 4, 0.25), 5);
        Field back = restrict_field(prolong_field(c));
        for (int j = 1; j <= 4; ++j)
            for (int i = 1; i <= 6; ++i)
                CHECK(back(i, j) == c(i, j));
    }
    SUBCASE("prolong after restrict is a projection") {
        Field f = random_field(GridSpec::make(8, 8, 0.125), 6);
        Field once = prolong_field(restrict_field(f));
        Field twice = prolong_field(restrict_field(once));
        for (int j = 1; j <= 8; ++j)
            for (int i = 1; i <= 8; ++i)
                CHECK(twice(i, j) == once(i, j));
    }
}

TEST_CASE("hierarchy construction") {
    CHECK(auto_depth(128, 128) == 5); // bottoms out at 4x4
    CHECK(auto_depth(8, 8) == 1);
    CHECK(auto_depth(4, 4) == 0);
    CHECK(auto_depth(6, 6) == 0);
    CHECK(auto_depth(128, 64) == 4);

    MgParams mg;
    Hierarchy hier(GridSpec::make(32, 32, 1.0 / 32), mg);
    CHECK(hier.depth() == 3);
    CHECK(hier.spec(3).m == 4);
    CHECK(hier.spec(3).h == doctest::Approx(0.25));

    mg.depth = 6;
    CHECK_THROWS_AS(Hierarchy(GridSpec::make(32, 32, 1.0 / 32), mg), std::invalid_argument);
    mg.depth = 0;
    CHECK(Hierarchy(GridSpec::make(32, 32, 1.0 / 32), mg).depth() == 0);
    mg.depth = -1;
    mg.sweeps = 0;
    CHECK_THROWS_AS(Hierarchy(GridSpec::make(32, 32, 1.0 / 32), mg), std::invalid_argument);
}

TEST_CASE("per-level contexts share the fine-grid scalars") {
    GridSpec spec = GridSpec::make(16, 16, 1.0 / 16);
    MgParams mg;
    Hierarchy hier(spec, mg);
    State prev = interface_state(spec, 0.08);
    ModelParams p = growth_params();
    hier.prepare_step(prev, 1e-6, p, 0.123);
    const double bk = surface_quadrature(prev.phi, p.epsilon);
    for (int d = 0; d <= hier.depth(); ++d) {
        CHECK(hier.context(d).bk == bk);
        CHECK(hier.context(d).ah == 0.123);
        CHECK(hier.context(d).spec.m == 16 >> d);
    }
    // level-1 lagged field equals the restriction of the fine one
    Field r = restrict_field(prev.phi);
    for (int j = 1; j <= 8; ++j)
        for (int i = 1; i <= 8; ++i)
            CHECK(hier.context(1).phi_k(i, j) == r(i, j));
}

TEST_CASE("single-level v-cycle is pre- plus post-smoothing") {
    GridSpec spec = GridSpec::make(8, 8, 0.125);
    MgParams mg;
    mg.depth = 0;
    mg.sweeps = 2;
    Hierarchy hier(spec, mg);
    State prev = interface_state(spec, 0.1);
    ModelParams p = growth_params();
    hier.prepare_step(prev, 1e-6, p, 0.0);
    SourceBundle src = assemble_source(hier.context(0));

    State a = prev;
    hier.fas_vcycle(a, src, 0);
    State b = prev;
    smooth(b, src, hier.context(0), 2);
    smooth(b, src, hier.context(0), 2);
    for (int k = 0; k < 5; ++k)
        for (int j = 1; j <= spec.n; ++j)
            for (int i = 1; i <= spec.m; ++i)
                CHECK(a.component(k)(i, j) == b.component(k)(i, j));
}

TEST_CASE("an exact fine-grid solution is a v-cycle fixed point") {
    GridSpec spec = GridSpec::make(8, 8, 0.125);
    MgParams mg;
    Hierarchy hier(spec, mg);
    State prev = interface_state(spec, 0.1);
    ModelParams p = growth_params();
    hier.prepare_step(prev, 1e-6, p, 0.0);
    SourceBundle src = assemble_source(hier.context(0));

    // over-solve by plain smoothing on the fine level
    State x = prev;
    smooth(x, src, hier.context(0), 4000);
    REQUIRE(residual_norm(x, src, hier.context(0)) < 1e-13);

    State before = x;
    hier.fas_vcycle(x, src, 0);
    double diff = 0.0;
    for (int k = 0; k < 5; ++k)
        for (int j = 1; j <= spec.n; ++j)
            for (int i = 1; i <= spec.m; ++i)
                diff = std::max(diff,
                                std::abs(x.component(k)(i, j) - before.component(k)(i, j)));
    CHECK(diff <= 1e-12);
}

TEST_CASE("time-step solve") {
    GridSpec spec = GridSpec::make(32, 32, 1.0 / 32);
    ModelParams p = growth_params();

    SUBCASE("stopping rule: huge tolerance returns immediately") {
        MgParams mg;
        mg.tol = 1e300;
        Hierarchy hier(spec, mg);
        State prev = interface_state(spec, 0.06);
        State next;
        SolveStats st = hier.solve_time_step(prev, 1e-6, p, 0.0, next);
        CHECK(st.cycles == 0);
        CHECK(st.residuals.size() == 1);
    }
    SUBCASE("uniform fixed point converges with zero cycles") {
        MgParams mg;
        Hierarchy hier(spec, mg);
        ModelParams q = p;
        q.beta_in = q.beta_out = 0.0;
        State prev(spec);
        prev.phi.fill(1.0);
        prev.psi.fill(q.psi_in);
        refresh_ghosts(prev);
        State next;
        SolveStats st = hier.solve_time_step(prev, 1e-6, q, 0.0, next);
        CHECK(st.cycles <= 1);
        CHECK(st.residuals.front() < mg.tol);
    }
    SUBCASE("residual history is stored and decreasing after the first cycle") {
        MgParams mg;
        mg.tol = 1e-9;
        Hierarchy hier(spec, mg);
        State prev = interface_state(spec, 0.06);
        State next;
        SolveStats st = hier.solve_time_step(prev, 1e-6, p, 0.0, next);
        CHECK(st.cycles >= 2);
        CHECK(st.residuals.size() == static_cast<std::size_t>(st.cycles) + 1);
        for (std::size_t i = 2; i < st.residuals.size(); ++i)
            CHECK(st.residuals[i] < st.residuals[i - 1]);
        CHECK(st.residuals.back() < mg.tol);
        // accepted state satisfies the system to the tolerance
        hier.prepare_step(prev, 1e-6, p, 0.0);
        SourceBundle src = assemble_source(hier.context(0));
        CHECK(residual_norm(next, src, hier.context(0)) < mg.tol);
    }
    SUBCASE("NotConverged carries the residual history") {
        MgParams mg;
        mg.tol = 1e-300;
        mg.max_cycles = 2;
        Hierarchy hier(spec, mg);
        State prev = interface_state(spec, 0.06);
        State next;
        try {
            hier.solve_time_step(prev, 1e-6, p, 0.0, next);
            FAIL("expected NotConvergedError");
        } catch (const NotConvergedError& e) {
            CHECK(e.residual_history.size() == 3);
        }
    }
    SUBCASE("mass guard bounds the per-step mass defect") {
        MgParams mg;
        mg.tol = 1e-6;
        mg.mass_tol = 1e-13;
        Hierarchy hier(spec, mg);
        State prev = interface_state(spec, 0.06);
        State next;
        hier.solve_time_step(prev, 1e-6, p, 0.0, next);
        hier.prepare_step(prev, 1e-6, p, 0.0);
        SourceBundle src = assemble_source(hier.context(0));
        CHECK(std::abs(residual_mass_defect(next, src, hier.context(0))) <= 1e-13);
    }
}
