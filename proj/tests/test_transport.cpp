// Transport tendencies and the explicit Euler step: conservation, the oxygen
// maximum principle, the p = 2 heat reduction and epsilon consistency.

#include <cmath>

#include "cns/driver.hpp"
#include "cns/errors.hpp"
#include "cns/operators.hpp"
#include "cns/transport.hpp"
#include "oracle.hpp"
#include "test_support.hpp"

using namespace cns;
using cns::test::pass;
using cns::test::rng;

namespace {

Grid grid2(int n) { return Grid(2, {n, n, 1}, {1.0, 1.0, 1.0}); }

ModelParams blob_params() {
    ModelParams p;
    p.p = 2.2;
    p.epsilon = 0.05;
    p.kappa = 1.0;
    p.phi_gradient = {0.0, -0.1, 0.0};
    p.s0 = 1.0;
    return p;
}

void set_gaussian(ScalarField& f, double amp, double width, double cx, double cy) {
    const Grid& g = f.grid();
    for (int j = 0; j < g.cells[1]; ++j)
        for (int i = 0; i < g.cells[0]; ++i) {
            const double dx0 = g.center(0, i) - cx, dx1 = g.center(1, j) - cy;
            f(i, j) = amp * std::exp(-(dx0 * dx0 + dx1 * dx1) / (2.0 * width * width));
        }
    fill_ghosts(f, BC::neumann_zero);
}

void test_tendencies() {
    const Grid g = grid2(16);
    const ModelParams params = blob_params();

    // equilibrium: constant n, constant c, no flow
    {
        State s(g);
        s.n.fill(1.3);
        s.c.fill(0.6);
        s.refresh_ghosts();
        // n sees no gradients at all
        REQUIRE(l2_norm(n_tendency(s, params)) == 0.0, "flat state has zero n tendency");
    }

    // chemotaxis off (constant c): the n tendency is pure p-Laplacian
    {
        auto eng = rng(51);
        State s(g);
        s.n = cns::test::random_scalar(g, eng, 0.2, 2.0);
        s.c.fill(0.5);
        s.refresh_ghosts();
        const ScalarField tn = n_tendency(s, params);
        const ScalarField pl = plaplacian_div(s.n, params.p, params.epsilon);
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i)
                REQUIRE(tn(i, j) == pl(i, j), "constant c reduces to diffusion only");
    }

    // conservation on a random admissible state
    {
        auto eng = rng(52);
        State s(g);
        s.n = cns::test::random_scalar(g, eng, 0.0, 2.0);
        s.c = cns::test::random_scalar(g, eng, 0.0, 1.0);
        s.u = cns::test::random_velocity(g, eng, 0.3);
        s.refresh_ghosts();
        const double total = integrate(n_tendency(s, params));
        REQUIRE(std::fabs(total) <= 1e-12 * (1.0 + l2_norm(s.n)),
                "n tendency integrates to zero");
    }

    // c tendencies
    {
        State s(g);
        s.c.fill(0.0);
        s.n.fill(1.0);
        s.refresh_ghosts();
        REQUIRE(l2_norm(c_tendency(s, params)) == 0.0, "c = 0 is absorbing");

        s.c.fill(params.s0);
        s.refresh_ghosts();
        const ScalarField tc = c_tendency(s, params);
        const double expect = -f_eps(1.0, params.epsilon) * params.sensitivity.f(params.s0);
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i)
                REQUIRE_CLOSE(tc(i, j), expect, 1e-14, "uniform consumption at c = s0");
        REQUIRE(expect < 0.0, "consumption is strictly negative where n > 0");
    }
    pass("transport tendencies");
}

void test_step_invariants() {
    const Grid g = grid2(16);
    const ModelParams params = blob_params();

    // equilibrium fixed point
    {
        ModelParams still = params;
        still.phi_gradient = {0.0, 0.0, 0.0};
        TransportSolver solver(g, still);
        State s(g);
        s.n.fill(1.0);
        s.c.fill(0.0);
        s.refresh_ghosts();
        const State before = s;
        solver.step(s, 1e-4);
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i) {
                REQUIRE(s.n(i, j) == before.n(i, j), "equilibrium n unchanged");
                REQUIRE(s.c(i, j) == before.c(i, j), "equilibrium c unchanged");
            }
    }

    // mass conservation and the maximum principle over many steps
    {
        TransportSolver solver(g, params);
        State s(g);
        set_gaussian(s.n, 1.0, 0.2, 0.5, 0.6);
        s.c.fill(params.s0);
        s.refresh_ghosts();
        const double mass0 = integrate(s.n);
        double prev_max_c = max_interior(s.c);
        for (int step = 0; step < 400; ++step) {
            const double dt = stable_dt(s, params, 0.8);
            solver.step(s, dt);
            const double mass = integrate(s.n);
            REQUIRE(std::fabs(mass - mass0) <= 1e-12 * mass0, "mass conserved per step");
            const double mc = max_interior(s.c);
            REQUIRE(mc <= prev_max_c + 1e-12 * params.s0, "max c nonincreasing");
            REQUIRE(min_interior(s.c) >= -1e-12 * params.s0, "min c above -tol");
            REQUIRE(min_interior(s.n) >= -1e-8 * max_interior(s.n),
                    "monitored nonnegativity of n");
            prev_max_c = mc;
        }
    }

    // 1e4-step drift with the flow disabled (pure transport telescoping)
    {
        TransportSolver solver(g, params, /*disable_flow=*/true);
        State s(g);
        set_gaussian(s.n, 1.0, 0.2, 0.5, 0.6);
        s.c.fill(params.s0);
        s.refresh_ghosts();
        const double mass0 = integrate(s.n);
        for (int step = 0; step < 10000; ++step) {
            const double dt = stable_dt(s, params, 0.8);
            solver.step(s, dt);
        }
        REQUIRE(std::fabs(integrate(s.n) - mass0) <= 1e-12 * mass0,
                "relative drift within 1e-12 over 1e4 steps");
    }
    pass("step invariants (mass, max principle, positivity)");
}

void test_heat_reduction() {
    // p = 2 with inert chemotaxis is the explicit heat step; Richardson against
    // the dense matrix exponential gives slope 2
    const Grid g = grid2(8);
    ModelParams heat = blob_params();
    heat.p = 2.0;
    auto eng = rng(53);

    State base(g);
    base.n = cns::test::random_scalar(g, eng, 0.5, 1.5);
    base.c.fill(0.0);
    base.refresh_ghosts();

    const double dt0 = 1e-4;
    std::vector<double> errs;
    for (double dt : {dt0, dt0 / 2.0, dt0 / 4.0}) {
        State s = base;
        TransportSolver solver(g, heat, true);
        solver.step(s, dt);
        const ScalarField ref = oracle::heat_reference(base.n, dt, g);
        double e2 = 0.0;
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i) {
                const double d = s.n(i, j) - ref(i, j);
                e2 += d * d;
            }
        errs.push_back(std::sqrt(e2 * g.cell_volume()));
    }
    const double slope1 = std::log2(errs[0] / errs[1]);
    const double slope2 = std::log2(errs[1] / errs[2]);
    REQUIRE(std::fabs(slope1 - 2.0) <= 0.2 && std::fabs(slope2 - 2.0) <= 0.2,
            "one-step error is O(dt^2) against the matrix exponential");
    pass("p = 2 heat reduction (Richardson slope 2)");
}

void test_eps_consistency() {
    // tendencies differ by O(|eps1 - eps2|) on smooth data with nonvanishing
    // gradients
    const Grid g = grid2(32);
    ModelParams params = blob_params();
    State s(g);
    for (int j = 0; j < g.cells[1]; ++j)
        for (int i = 0; i < g.cells[0]; ++i) {
            const double x = g.center(0, i), y = g.center(1, j);
            s.n(i, j) = 1.5 + std::sin(2.0 * M_PI * x) * std::sin(2.0 * M_PI * y);
            s.c(i, j) = 0.5 + 0.3 * std::cos(M_PI * x) * std::cos(M_PI * y);
        }
    s.refresh_ghosts();

    auto tend_at = [&](double eps) {
        ModelParams p = params;
        p.epsilon = eps;
        return n_tendency(s, p);
    };
    const ScalarField t2 = tend_at(1e-2), t3 = tend_at(1e-3), t4 = tend_at(1e-4);
    double d23 = 0.0, d34 = 0.0;
    for (int j = 0; j < g.cells[1]; ++j)
        for (int i = 0; i < g.cells[0]; ++i) {
            d23 += std::pow(t2(i, j) - t3(i, j), 2);
            d34 += std::pow(t3(i, j) - t4(i, j), 2);
        }
    d23 = std::sqrt(d23);
    d34 = std::sqrt(d34);
    // |eps1-eps2| ratio is (1e-2 - 1e-3)/(1e-3 - 1e-4) = 10
    const double slope = std::log10(d23 / d34);
    REQUIRE(slope > 0.7 && slope < 1.3, "tendency differences scale like O(|eps1 - eps2|)");
    pass("epsilon consistency of the tendencies");
}

void test_blowup_detection() {
    const Grid g = grid2(8);
    const ModelParams params = blob_params();
    TransportSolver solver(g, params, true);
    State s(g);
    s.n.fill(1.0);
    s.c.fill(0.5);
    s.refresh_ghosts();
    s.n(3, 3) = std::numeric_limits<double>::quiet_NaN();
    bool threw = false;
    try {
        solver.step(s, 1e-5);
    } catch (const BlowupError& e) {
        threw = true;
        REQUIRE(e.step == s.step_index, "blow-up carries the step index");
    }
    REQUIRE(threw, "NaN raises blow-up detection");
    pass("blow-up detection");
}

}  // namespace

int main() {
    test_tendencies();
    test_step_invariants();
    test_heat_reduction();
    test_eps_consistency();
    test_blowup_detection();
    std::printf("test_transport: all passed\n");
    return 0;
}
