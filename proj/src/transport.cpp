#include "cns/transport.hpp"

#include <cmath>

#include "cns/errors.hpp"
#include "cns/operators.hpp"

namespace cns {

void State::refresh_ghosts() {
    fill_ghosts(n, BC::neumann_zero);
    fill_ghosts(c, BC::neumann_zero);
    fill_ghosts(u, BC::dirichlet_zero);
}

void n_tendency(const State& s, const ModelParams& params, ScalarField& out) {
    const Grid& g = s.n.grid();
    plaplacian_div(s.n, params.p, params.epsilon, out);
    ScalarField term(g);
    chemotaxis_div(s.n, s.c, params, term);
    axpy(-1.0, term, out);
    advect_scalar(s.n, s.u, term);
    axpy(1.0, term, out);
}

ScalarField n_tendency(const State& s, const ModelParams& params) {
    ScalarField out(s.n.grid());
    n_tendency(s, params, out);
    return out;
}

void c_tendency(const State& s, const ModelParams& params, ScalarField& out) {
    const Grid& g = s.c.grid();
    laplacian(s.c, out);
    const double eps = params.epsilon;
    const int n2 = g.dim == 3 ? g.cells[2] : 1;
    for (int k = 0; k < n2; ++k)
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i) {
                const double feps = std::log1p(eps * s.n(i, j, k)) / eps;
                out(i, j, k) -= feps * params.sensitivity.f(s.c(i, j, k));
            }
    ScalarField adv(g);
    advect_scalar(s.c, s.u, adv);
    axpy(1.0, adv, out);
}

ScalarField c_tendency(const State& s, const ModelParams& params) {
    ScalarField out(s.c.grid());
    c_tendency(s, params, out);
    return out;
}

TransportSolver::TransportSolver(const Grid& g, const ModelParams& params,
                                 bool disable_flow, FlowSolver::Config flow_cfg)
    : grid_(g),
      params_(params),
      disable_flow_(disable_flow),
      flow_(g, params, flow_cfg),
      ndot_(g),
      cdot_(g) {}

StepInfo TransportSolver::step(State& s, double dt) {
    n_tendency(s, params_, ndot_);
    c_tendency(s, params_, cdot_);

    StepInfo info;
    info.dt = dt;

    if (!disable_flow_) {
        flow_.ns_step(s.u, s.n, dt, s.pressure);
        ScalarField div(grid_);
        cell_divergence(s.u, div);
        info.max_div_u = std::max(std::fabs(min_interior(div)), std::fabs(max_interior(div)));
    }

    axpy(dt, ndot_, s.n);
    axpy(dt, cdot_, s.c);
    fill_ghosts(s.n, BC::neumann_zero);
    fill_ghosts(s.c, BC::neumann_zero);

    s.t += dt;
    s.step_index += 1;

    if (!all_finite(s.n) || !all_finite(s.c) || !all_finite(s.u))
        throw BlowupError("blow-up detected", s.step_index);
    return info;
}

}  // namespace cns
